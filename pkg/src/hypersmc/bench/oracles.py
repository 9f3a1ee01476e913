"""Independent ground-truth estimators for the shipped benchmarks.

These deliberately bypass the verification engines: the thermostat oracle
uses the closed-form cycle time of the template dynamics, and the queueing
oracle estimates the outer probability by plain two-level sampling.
"""

import numpy as np

from ..logic.parser import parse_formula
from ..models.base import child_seed
from ..semantics.evaluate import HorizonExceeded, eval_path
from ..semantics.trace import PathAssignment


def thermostat_cycle_probability(delta: float, std: float = 0.25, c: float = 5.0,
                                 span: float = 25.0, n: int = 400_000, seed: int = 2024):
    """P(|C1 - C2| <= delta) for cycle time C = span/(c+n1) + span/(c+n2),
    noise per leg drawn N(0, std^2); returns (estimate, standard_error)."""
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, std, size=(n, 4))
    c1 = span / (c + noise[:, 0]) + span / (c + noise[:, 1])
    c2 = span / (c + noise[:, 2]) + span / (c + noise[:, 3])
    hits = np.abs(c1 - c2) <= delta
    p = hits.mean()
    return float(p), float(np.sqrt(p * (1 - p) / n))


def _fairness_bodies(t: float):
    lead = parse_formula(
        f"(!q1@pi1 & !q2@pi2) U[0,inf] (q1@pi1 & F[{t},inf] q2@pi2)")
    trail = parse_formula(
        f"(!q1@pi1 & !q2@pi2) U[0,inf] (q2@pi2 & F[{t},inf] q1@pi1)")
    return lead, trail


def _holds(body, tr1, tr2):
    try:
        return eval_path(body, PathAssignment({"pi1": tr1, "pi2": tr2}), 0.0)
    except HorizonExceeded:
        return False


def queue_fairness_oracle_multi(model, horizon: float, settings,
                                outer: int = 500, inner: int = 500, seed: int = 77):
    """Estimate the outer probability of the fairness property for several
    (t, delta) settings in one two-level sampling pass: ``outer`` reference
    paths, each compared against ``inner`` fresh paths on which both inner
    events are evaluated. Returns [(estimate, standard_error), ...] aligned
    with ``settings``."""
    bodies = [_fairness_bodies(t) for t, _ in settings]
    hits = [0] * len(settings)
    for i in range(outer):
        tr1 = model.sample(child_seed(seed, 0, i), horizon)
        n_lead = [0] * len(settings)
        n_trail = [0] * len(settings)
        for j in range(inner):
            tr2 = model.sample(child_seed(seed, 1, i, j), horizon)
            for k, (lead, trail) in enumerate(bodies):
                n_lead[k] += _holds(lead, tr1, tr2)
                n_trail[k] += _holds(trail, tr1, tr2)
        for k, (_, delta) in enumerate(settings):
            if abs(n_lead[k] - n_trail[k]) / inner <= delta:
                hits[k] += 1
    out = []
    for h in hits:
        p = h / outer
        out.append((p, float(np.sqrt(max(p * (1 - p), 1e-12) / outer))))
    return out


def queue_fairness_oracle(model, horizon: float, t: float, delta: float,
                          outer: int = 500, inner: int = 500, seed: int = 77):
    """Single-setting convenience wrapper around the multi-setting oracle."""
    return queue_fairness_oracle_multi(model, horizon, [(t, delta)], outer, inner, seed)[0]
