#!/usr/bin/env python3
"""Run every shipped benchmark suite and print the summary tables.

Example:
    python scripts/run_benchmarks.py --reps 20 --seed-base 1 --out results.json
"""

import argparse
import json

from hypersmc.bench import format_rows, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed-base", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=None, help="write all rows as JSON")
    args = ap.parse_args()

    all_rows = {}
    for suite in ("stats-unit", "example1", "thermostat", "queue-small"):
        print(f"== {suite} ==")
        rows = run_suite(suite, reps=args.reps, seed_base=args.seed_base, jobs=args.jobs)
        print(format_rows(rows))
        print()
        all_rows[suite] = rows
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(all_rows, fh, indent=2)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
