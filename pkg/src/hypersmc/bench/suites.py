"""Benchmark suites: named collections of (model, formula, significance)
setups with expected verdicts, run repeatedly under derived seeds and
summarized as accuracy / mean samples / mean wall time."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources

import numpy as np
import yaml

from ..logic.parser import parse_state_formula
from ..models.config import model_from_dict
from ..smc.config import SmcConfig
from ..smc.engines import verify


def data_text(name: str) -> str:
    return (resources.files("hypersmc.bench") / "data" / name).read_text(encoding="utf-8")


def data_path(name: str):
    return resources.files("hypersmc.bench") / "data" / name


def bench_model(name: str):
    """(model, region definitions, default horizon) for a shipped config."""
    return model_from_dict(yaml.safe_load(data_text(name)))


@dataclass(frozen=True)
class Setup:
    label: str
    model_file: str
    formula: str  # formula text
    alpha: float
    expected: str  # "true" | "false"
    horizon: float | None = None
    batch: int = 10
    max_samples: int = 1_000_000


def sensitivity_formula(delta: float, eps: float) -> str:
    return ("P{pi1,pi2}((!q@pi1 & !q@pi2) U[0,inf] "
            f"(q@pi1 & F[0,{delta}] q@pi2 | q@pi2 & F[0,{delta}] q@pi1)) >= {1.0 - eps}")


def fairness_formula(t: float, delta: float, eps: float) -> str:
    return ("P{pi1}(abs("
            f"P{{pi2}}((!q1@pi1 & !q2@pi2) U[0,inf] (q1@pi1 & F[{t},inf] q2@pi2)) - "
            f"P{{pi2}}((!q1@pi1 & !q2@pi2) U[0,inf] (q2@pi2 & F[{t},inf] q1@pi1))"
            f") <= {delta}) >= {1.0 - eps}")


EXAMPLE1_EVENT_FAST = "(!s1@pi1) U[0,inf] (s1@pi1 & (s1@pi1 U[0,1] s0@pi1))"
EXAMPLE1_EVENT_SLOW = "(!s2@pi2) U[0,inf] (s2@pi2 & (s2@pi2 U[0,1] s1@pi2))"


def example1_formula(threshold: float) -> str:
    return (f"P{{pi2}}({EXAMPLE1_EVENT_SLOW}) - P{{pi1}}({EXAMPLE1_EVENT_FAST})"
            f" > {threshold}")


THERMOSTAT_TABLE = [
    # (delta, eps, alpha, expected)
    (0.9, 0.05, 0.05, "false"),
    (0.9, 0.05, 0.01, "false"),
    (0.9, 0.01, 0.05, "false"),
    (0.9, 0.01, 0.01, "false"),
    (1.1, 0.05, 0.05, "true"),
    (1.1, 0.05, 0.01, "true"),
    (1.1, 0.01, 0.05, "false"),
    (1.1, 0.01, 0.01, "false"),
]

QUEUE_TABLE = [
    # (t, delta, eps, alpha, expected)
    (5.0, 0.5, 0.5, 0.05, "true"),
    (0.1, 0.1, 0.1, 0.05, "false"),
]


def thermostat_setups():
    return [
        Setup(f"delta={d} eps={e} alpha={a}", "thermostat.yaml",
              sensitivity_formula(d, e), a, expected)
        for d, e, a, expected in THERMOSTAT_TABLE
    ]


def example1_setups():
    return [
        Setup("diff > 0.05", "example1.yaml", example1_formula(0.05), 0.01, "true"),
        Setup("diff > 0.5", "example1.yaml", example1_formula(0.5), 0.01, "false"),
    ]


def queue_setups():
    return [
        Setup(f"t={t} delta={d} eps={e} alpha={a}", "queue_small.yaml",
              fairness_formula(t, d, e), a, expected)
        for t, d, e, a, expected in QUEUE_TABLE
    ]


SUITES = {
    "thermostat": thermostat_setups,
    "example1": example1_setups,
    "queue-small": queue_setups,
}


def derive_seed(seed_base: int, setup_idx: int, rep: int) -> int:
    ss = np.random.SeedSequence((int(seed_base), int(setup_idx), int(rep)))
    return int(ss.generate_state(1, np.uint64)[0])


def _run_one(args):
    model_file, formula_text, alpha, horizon, batch, max_samples, seed = args
    model, regions, default_h = bench_model(model_file)
    cfg = SmcConfig(alpha=alpha, horizon=horizon or default_h, seed=seed,
                    batch=batch, max_samples=max_samples)
    formula = parse_state_formula(formula_text)
    v = verify(model, formula, cfg, regions)
    return v.outcome, v.total_tuples, v.wall_time


def run_setup(setup: Setup, reps: int, seed_base: int, setup_idx: int = 0, jobs: int = 1):
    args = [
        (setup.model_file, setup.formula, setup.alpha, setup.horizon,
         setup.batch, setup.max_samples, derive_seed(seed_base, setup_idx, rep))
        for rep in range(reps)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, args))
    else:
        results = [_run_one(a) for a in args]
    outcomes = [r[0] for r in results]
    counts = {o: outcomes.count(o) for o in set(outcomes)}
    majority = max(counts, key=counts.get)
    return {
        "setup": setup.label,
        "alpha": setup.alpha,
        "expected": setup.expected,
        "accuracy": outcomes.count(setup.expected) / reps,
        "mean_samples": float(np.mean([r[1] for r in results])),
        "mean_wall_time_s": float(np.mean([r[2] for r in results])),
        "majority": majority,
        "outcomes": counts,
    }


def run_suite(name: str, reps: int = 20, seed_base: int = 0, jobs: int = 1):
    if name == "stats-unit":
        return stats_unit_rows()
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r} (known: {sorted(SUITES)} + ['stats-unit'])")
    rows = []
    for idx, setup in enumerate(SUITES[name]()):
        rows.append(run_setup(setup, reps, seed_base, idx, jobs))
    return rows


def stats_unit_rows():
    """Reference values for the statistics layer, reported as a pass/fail table."""
    from ..stats import binom_cdf, cp_significance, reg_inc_beta

    checks = [
        ("cp_significance(0,0.5,0,10)", cp_significance(0.0, 0.5, 0, 10), 9.765625e-4, 0.0),
        ("binom_cdf(5,10,0.5)", binom_cdf(5, 10, 0.5), 0.623046875, 1e-12),
        ("reg_inc_beta(0.5,1,1)", reg_inc_beta(0.5, 1.0, 1.0), 0.5, 1e-12),
        ("reg_inc_beta(0.3,1,7)", reg_inc_beta(0.3, 1.0, 7.0), 1.0 - 0.7 ** 7, 1e-12),
        ("reg_inc_beta(0.5,3,3)", reg_inc_beta(0.5, 3.0, 3.0), 0.5, 1e-12),
        ("cp_significance(0,1,7,9)", cp_significance(0.0, 1.0, 7, 9), 0.0, 0.0),
    ]
    rows = []
    for label, got, want, tol in checks:
        rows.append({
            "setup": label,
            "expected": want,
            "got": got,
            "pass": abs(got - want) <= tol,
        })
    return rows


def format_rows(rows) -> str:
    if not rows:
        return "(empty)"
    cols = list(rows[0].keys())
    table = [cols] + [[_fmt(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
    lines = []
    for k, row in enumerate(table):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.4g}"
    return str(v)
