#!/usr/bin/env python3
"""Estimate the benchmark ground truths independently of the verification
engines: the thermostat sensitivity probabilities from the closed-form cycle
time, and the queueing fairness probabilities by two-level sampling.

Example:
    python scripts/ground_truth.py --outer 200 --inner 200
"""

import argparse

from hypersmc.bench import bench_model, queue_fairness_oracle_multi, thermostat_cycle_probability
from hypersmc.bench.suites import QUEUE_TABLE


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outer", type=int, default=500)
    ap.add_argument("--inner", type=int, default=500)
    ap.add_argument("--seed", type=int, default=909)
    args = ap.parse_args()

    print("thermostat cycle-time sensitivity (noise std 0.25):")
    for delta in (0.9, 1.1):
        p, se = thermostat_cycle_probability(delta)
        print(f"  P(|C1-C2| <= {delta}) = {p:.4f} +- {se:.4f}")

    model, _, horizon = bench_model("queue_small.yaml")
    settings = [(t, d) for t, d, _, _, _ in QUEUE_TABLE]
    print(f"queueing fairness ({args.outer}x{args.inner} two-level estimate):")
    results = queue_fairness_oracle_multi(model, horizon, settings,
                                          outer=args.outer, inner=args.inner,
                                          seed=args.seed)
    for (t, d), (p, se) in zip(settings, results):
        print(f"  t={t} delta={d}: outer probability = {p:.4f} +- {se:.4f}")


if __name__ == "__main__":
    main()
