"""Command line interface.

``hypersmc check``  verifies one formula against one model and emits a JSON
report; exit status 0 for a true/false verdict, 2 for undecided, 1 for
usage, configuration, or formula errors.

``hypersmc bench``  runs a named benchmark suite repeatedly under derived
seeds and prints a summary table.
"""

import argparse
import datetime
import hashlib
import json
import sys

import numpy as np

from .logic.classify import UnsupportedShape
from .logic.parser import FormulaSyntaxError, parse_state_formula
from .models.base import ConfigError
from .models.config import load_model
from .semantics.evaluate import HorizonExceeded
from .smc.config import COUNT_ERROR, COUNT_FALSE, UNDECIDED, SmcConfig
from .smc.engines import InfiniteStateSpace, verify
from .bench.suites import SUITES, format_rows, run_suite

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDECIDED = 2


def _build_parser():
    parser = argparse.ArgumentParser(prog="hypersmc",
                                     description="statistical checking of probabilistic "
                                                 "hyperproperties on stochastic models")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="verify one formula against one model")
    check.add_argument("--model", required=True, help="model configuration file (YAML)")
    check.add_argument("--formula", required=True, help="formula file")
    check.add_argument("--alpha", type=float, default=0.05,
                       help="desired significance level in (0,1), default 0.05")
    check.add_argument("--batch", type=int, default=10, help="samples per iteration, default 10")
    check.add_argument("--horizon", type=float, default=None,
                       help="simulation horizon; defaults to the model file's horizon")
    check.add_argument("--seed", type=int, default=0, help="master seed, default 0")
    check.add_argument("--max-samples", type=int, default=1_000_000,
                       help="total tuple budget before returning undecided, default 1e6")
    check.add_argument("--report", default=None, help="write the JSON report to this path")
    check.add_argument("--trace-stats", action="store_true",
                       help="include the per-iteration statistics log in the report")
    check.add_argument("--truncation-policy", choices=[COUNT_FALSE, COUNT_ERROR],
                       default=COUNT_FALSE,
                       help="how to count evaluations cut off by the horizon")
    check.add_argument("--dump-trace", type=int, default=None, metavar="K",
                       help="print the K-th sampled path instead of verifying")

    bench = sub.add_parser("bench", help="run a benchmark suite")
    bench.add_argument("suite", choices=sorted(SUITES) + ["stats-unit"])
    bench.add_argument("--reps", type=int, default=20, help="repetitions per setup, default 20")
    bench.add_argument("--seed-base", type=int, default=0, help="base seed, default 0")
    bench.add_argument("--jobs", type=int, default=1, help="parallel worker processes, default 1")
    bench.add_argument("--report", default=None, help="write the rows as JSON to this path")
    return parser


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def run_check(args) -> tuple[int, dict | None]:
    try:
        model, regions, default_horizon = load_model(args.model)
        horizon = args.horizon if args.horizon is not None else default_horizon
        if horizon is None:
            raise ConfigError("no horizon given (neither --horizon nor the model file)")
        with open(args.formula, "r", encoding="utf-8") as fh:
            formula_text = fh.read()
        formula = parse_state_formula(formula_text)
        cfg = SmcConfig(alpha=args.alpha, horizon=horizon, seed=args.seed,
                        batch=args.batch, max_samples=args.max_samples,
                        truncation_policy=args.truncation_policy,
                        trace_stats=args.trace_stats)
    except (ConfigError, FormulaSyntaxError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR, None

    if args.dump_trace is not None:
        trace = model.sample(
            np.random.SeedSequence(entropy=cfg.seed, spawn_key=(0, args.dump_trace, 0)),
            horizon)
        print(trace.dump())
        print(trace.to_json())
        return EXIT_OK, None

    try:
        verdict = verify(model, formula, cfg, regions)
    except (UnsupportedShape, InfiniteStateSpace, ConfigError, HorizonExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR, None

    report = verdict.as_dict(with_iterations=cfg.trace_stats)
    report["inputs"] = {
        "model": args.model,
        "model_sha256": _sha256(args.model),
        "formula": formula_text.strip(),
        "alpha": cfg.alpha,
        "batch": cfg.batch,
        "horizon": cfg.horizon,
        "seed": cfg.seed,
        "max_samples": cfg.max_samples,
        "truncation_policy": cfg.truncation_policy,
    }
    report["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    text = json.dumps(report, indent=2)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return (EXIT_UNDECIDED if verdict.outcome == UNDECIDED else EXIT_OK), report


def run_bench(args) -> int:
    try:
        rows = run_suite(args.suite, reps=args.reps, seed_base=args.seed_base, jobs=args.jobs)
    except (ConfigError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(format_rows(rows))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
    if args.suite == "stats-unit" and not all(r["pass"] for r in rows):
        return EXIT_ERROR
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "check":
        code, _ = run_check(args)
        return code
    return run_bench(args)


if __name__ == "__main__":
    sys.exit(main())
