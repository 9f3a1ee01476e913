"""The four verification engines.

All sampling is counter-indexed: trace (i, m) of operator key K is generated
from SeedSequence(entropy=seed, spawn_key=K + (i, m)), so a run is fully
reproducible from its configuration and no engine shares randomness with
another. One shared budget counts consumed sample tuples across every
operator of a job; exhausting it yields an undecided verdict.
"""

import math
import time

import numpy as np

from ..logic.classify import AlgorithmKind
from ..semantics.evaluate import HorizonExceeded, eval_path
from ..semantics.trace import PathAssignment
from ..stats.beta import binom_cdf
from ..stats.clopper_pearson import CountStat, cp_for_threshold, cp_significance, joint_significance
from .compile import JointPlan, NestedPathPlan, NestedStatePlan, SimplePlan, compile_formula
from .config import COUNT_ERROR, FALSE, TRUE, UNDECIDED, SmcConfig, Verdict


class InfiniteStateSpace(RuntimeError):
    pass


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def grant(self, n: int) -> int:
        take = min(n, self.limit - self.used)
        self.used += take
        return take


class _Counters:
    def __init__(self):
        self.truncated = 0
        self.samples = {}

    def add(self, name, n):
        self.samples[name] = self.samples.get(name, 0) + n


class _Context:
    def __init__(self, model, cfg: SmcConfig, region_defs=None):
        self.model = model
        self.cfg = cfg
        self.region_defs = region_defs
        self.budget = _Budget(cfg.max_samples)
        self.counters = _Counters()

    def with_model(self, model):
        clone = _Context.__new__(_Context)
        clone.__dict__.update(self.__dict__)
        clone.model = model
        return clone


class _TupleSource:
    """Seed-indexed stream of k-trace tuples with block prefetching."""

    def __init__(self, ctx: _Context, k: int, key: tuple, name: str):
        self.ctx = ctx
        self.k = k
        self.key = tuple(int(x) for x in key)
        self.name = name
        self.counter = 0
        self.buffer = []
        self._block = 64 if getattr(ctx.model, "prefers_large_batches", False) else 0

    def _fetch(self, count):
        block = max(count, self._block)
        self._block = min(max(2 * block, 16), 128)
        seeds = [
            np.random.SeedSequence(entropy=self.ctx.cfg.seed,
                                   spawn_key=self.key + (self.counter + i, m))
            for i in range(block)
            for m in range(self.k)
        ]
        traces = self.ctx.model.sample_batch(seeds, self.ctx.cfg.horizon)
        for i in range(block):
            self.buffer.append(tuple(traces[i * self.k:(i + 1) * self.k]))
        self.counter += block

    def draw(self, count):
        """Up to ``count`` tuples, limited by the shared budget."""
        granted = self.ctx.budget.grant(count)
        if granted == 0:
            return []
        while len(self.buffer) < granted:
            self._fetch(granted - len(self.buffer))
        out = self.buffer[:granted]
        del self.buffer[:granted]
        self.ctx.counters.add(self.name, granted)
        return out


class _Evaluator:
    def __init__(self, ctx: _Context, leaf, fixed=None):
        self.body = leaf.body
        self.order = leaf.order
        self.fixed = dict(fixed or {})
        self.ctx = ctx

    def __call__(self, tup) -> bool:
        bindings = dict(zip(self.order, tup))
        bindings.update(self.fixed)
        try:
            return eval_path(self.body, PathAssignment(bindings), 0.0)
        except HorizonExceeded:
            self.ctx.counters.truncated += 1
            if self.ctx.cfg.truncation_policy == COUNT_ERROR:
                raise
            return False


def _verdict_from_lower(assert_low: bool, op: str) -> str:
    """Map the claim "p_true below threshold" onto the formula's comparison."""
    if op in ("<", "<="):
        return TRUE if assert_low else FALSE
    return FALSE if assert_low else TRUE


class _SimpleRun:
    """One probability operator against a threshold (the batched loop of the
    basic engine); refinable to any target significance."""

    def __init__(self, ctx: _Context, plan: SimplePlan, key, name, fixed=None):
        self.ctx = ctx
        self.plan = plan
        # seed key as a one-leaf region run, so the degenerate joint reduction
        # consumes identical samples under a shared configuration
        self.src = _TupleSource(ctx, len(plan.leaf.order), key + (0,), name)
        self.eval = _Evaluator(ctx, plan.leaf, fixed)
        self.T = 0
        self.N = 0
        self.alpha = 1.0
        self.assert_low = False
        self.log = []

    def iterate(self) -> bool:
        tuples = self.src.draw(self.ctx.cfg.batch)
        if not tuples:
            return False
        self.T += sum(self.eval(t) for t in tuples)
        self.N += len(tuples)
        self.assert_low, self.alpha = cp_for_threshold(self.T, self.N, self.plan.p)
        self.log.append({"N": self.N, "T": self.T, "alpha": self.alpha})
        return True

    def refine(self, target: float) -> bool:
        while self.alpha > target:
            if not self.iterate():
                return False
        return True

    @property
    def formula_true(self) -> bool:
        return _verdict_from_lower(self.assert_low, self.plan.op) == TRUE


class _JointRun:
    """Region membership of a vector of operator probabilities, with the
    inscribed-box significance bound; refinable like _SimpleRun."""

    def __init__(self, ctx: _Context, plan: JointPlan, key, name_prefix, fixed=None):
        self.ctx = ctx
        self.plan = plan
        self.sources = [
            _TupleSource(ctx, len(leaf.order), key + (j,), f"{name_prefix}op{j + 1}")
            for j, leaf in enumerate(plan.leaves)
        ]
        self.evals = [_Evaluator(ctx, leaf, fixed) for leaf in plan.leaves]
        self.T = [0] * len(plan.leaves)
        self.N = [0] * len(plan.leaves)
        self.alpha = 1.0
        self.member = False
        self.log = []

    def iterate(self) -> bool:
        for j, (src, ev) in enumerate(zip(self.sources, self.evals)):
            tuples = src.draw(self.ctx.cfg.batch)
            if not tuples:
                return False
            self.T[j] += sum(ev(t) for t in tuples)
            self.N[j] += len(tuples)
        point = tuple(t / n for t, n in zip(self.T, self.N))
        self.member = self.plan.region.contains(point)
        side = self.plan.region if self.member else self.plan.region.complement()
        box = side.largest_box(point)
        if box is None:
            self.alpha = 1.0  # boundary point: no inscribed box, keep sampling
        else:
            stats = [CountStat(t, n) for t, n in zip(self.T, self.N)]
            self.alpha = joint_significance(box.intervals, stats)
        self.log.append({"N": list(self.N), "T": list(self.T),
                         "member": self.member, "alpha": self.alpha})
        return True

    def refine(self, target: float) -> bool:
        while self.alpha > target:
            if not self.iterate():
                return False
        return True

    @property
    def formula_true(self) -> bool:
        return self.member


def _make_run(ctx, plan, key, name_prefix="", fixed=None):
    if isinstance(plan, SimplePlan):
        return _SimpleRun(ctx, plan, key, name_prefix + "op1", fixed)
    return _JointRun(ctx, plan, key, name_prefix, fixed)


def _flat_verdict(ctx, run, target, algorithm) -> Verdict:
    decided = run.refine(target)
    outcome = (TRUE if run.formula_true else FALSE) if decided else UNDECIDED
    return Verdict(
        outcome=outcome,
        alpha=run.alpha if decided else min(1.0, run.alpha),
        alpha_desired=target,
        algorithm=algorithm,
        samples=dict(ctx.counters.samples),
        truncated=ctx.counters.truncated,
        iterations=run.log,
    )


def verify_simple(model, plan: SimplePlan, cfg: SmcConfig, region_defs=None) -> Verdict:
    t0 = time.perf_counter()
    ctx = _Context(model, cfg, region_defs)
    run = _SimpleRun(ctx, plan, (0,), "op1")
    return _finish(ctx, _flat_verdict(ctx, run, cfg.alpha, "simple"), t0)


def verify_joint(model, plan: JointPlan, cfg: SmcConfig, region_defs=None) -> Verdict:
    t0 = time.perf_counter()
    ctx = _Context(model, cfg, region_defs)
    run = _JointRun(ctx, plan, (0,), "")
    return _finish(ctx, _flat_verdict(ctx, run, cfg.alpha, "joint"), t0)


def _finish(ctx, verdict, t0):
    verdict.wall_time = time.perf_counter() - t0
    return verdict


def verify_nested_state(model, plan: NestedStatePlan, cfg: SmcConfig, region_defs=None) -> Verdict:
    t0 = time.perf_counter()
    n = model.state_count
    if n is None or not hasattr(model, "with_initial") or not hasattr(model, "with_extra_label"):
        raise InfiniteStateSpace(
            "state-embedded formulas need a finite, enumerable state space")
    ctx = _Context(model, cfg, region_defs)
    alpha_each = cfg.alpha / (n + 1)
    achieved = 0.0
    log = []
    positive = []
    for s in range(n):
        sub = ctx.with_model(model.with_initial(s))
        run = _make_run(sub, plan.rho_plan, (2, s), f"state{s}:")
        if not run.refine(alpha_each):
            return _undecided(ctx, "nested_state", cfg, t0, log)
        achieved += run.alpha
        log.append({"state": s, "holds": run.formula_true, "alpha": run.alpha})
        if run.formula_true:
            positive.append(s)
    relabeled = model.with_extra_label(plan.fresh_label, positive)
    outer_plan = compile_formula(plan.outer_formula, region_defs)
    outer_ctx = ctx.with_model(relabeled)
    outer_run = _make_run(outer_ctx, outer_plan, (3,), "outer:")
    if not outer_run.refine(alpha_each):
        return _undecided(ctx, "nested_state", cfg, t0, log)
    achieved += outer_run.alpha
    log.extend(outer_run.log)
    verdict = Verdict(
        outcome=TRUE if outer_run.formula_true else FALSE,
        alpha=achieved,
        alpha_desired=cfg.alpha,
        algorithm="nested_state",
        samples=dict(ctx.counters.samples),
        truncated=ctx.counters.truncated,
        iterations=log,
    )
    return _finish(ctx, verdict, t0)


def verify_nested_path(model, plan: NestedPathPlan, cfg: SmcConfig, region_defs=None) -> Verdict:
    t0 = time.perf_counter()
    ctx = _Context(model, cfg, region_defs)
    outer_src = _TupleSource(ctx, len(plan.outer_vars), (0,), "outer")
    inners = []
    c = 1
    alpha1 = cfg.alpha
    N = 0
    log = []
    while True:
        tuples = outer_src.draw(1)
        if not tuples:
            return _undecided(ctx, "nested_path", cfg, t0, log)
        fixed = dict(zip(plan.outer_vars, tuples[0]))
        inners.append(_make_run(ctx, plan.inner, (1, N), f"inner{N + 1}:", fixed))
        N += 1
        if not all(run.refine(alpha1) for run in inners):
            return _undecided(ctx, "nested_path", cfg, t0, log)
        A = sum(run.formula_true for run in inners)
        delta = math.ceil(c * alpha1 * N)
        alpha2 = 1.0 - binom_cdf(delta, N, alpha1)
        T_lo = max(0, A - delta)
        T_hi = min(A + delta, N)
        if T_hi / N < plan.p:
            decided, assert_low = True, True
            cp = cp_significance(0.0, plan.p, T_hi, N)
        elif T_lo / N > plan.p:
            decided, assert_low = True, False
            cp = cp_significance(plan.p, 1.0, T_lo, N)
        else:
            decided, cp = False, 1.0
        alpha = alpha2 + cp
        log.append({"N": N, "A": A, "delta": delta, "c": c,
                    "alpha1": alpha1, "alpha2": alpha2, "alpha": min(1.0, alpha)})
        if decided and alpha <= cfg.alpha:
            verdict = Verdict(
                outcome=_verdict_from_lower(assert_low, plan.op),
                alpha=alpha,
                alpha_desired=cfg.alpha,
                algorithm="nested_path",
                samples=dict(ctx.counters.samples),
                truncated=ctx.counters.truncated,
                iterations=log,
            )
            return _finish(ctx, verdict, t0)
        # shrink whichever error source dominates
        if alpha2 > alpha / 2.0:
            c += 1
        else:
            alpha1 = alpha1 / 2.0


def _undecided(ctx, algorithm, cfg, t0, log) -> Verdict:
    verdict = Verdict(
        outcome=UNDECIDED,
        alpha=1.0,
        alpha_desired=cfg.alpha,
        algorithm=algorithm,
        samples=dict(ctx.counters.samples),
        truncated=ctx.counters.truncated,
        iterations=log,
    )
    return _finish(ctx, verdict, t0)


def verify(model, formula, cfg: SmcConfig, region_defs=None) -> Verdict:
    """Classify, compile and dispatch to the right engine."""
    plan = compile_formula(formula, region_defs)
    if plan.kind == AlgorithmKind.SIMPLE:
        return verify_simple(model, plan, cfg, region_defs)
    if plan.kind == AlgorithmKind.JOINT:
        return verify_joint(model, plan, cfg, region_defs)
    if plan.kind == AlgorithmKind.NESTED_STATE:
        return verify_nested_state(model, plan, cfg, region_defs)
    return verify_nested_path(model, plan, cfg, region_defs)
