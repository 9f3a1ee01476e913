"""Evaluation of quantifier-free path formulas on tuples of traces.

Dense-time "exists t" quantification in until is discretized to the union of
segment boundaries of all bound traces (event traces) or to the grid (grid
traces), plus the window start point itself. For piecewise-constant label
signals this is exact on event traces and grid-resolution-exact on grids.

Evaluation is three-valued internally: a window reaching past the common
horizon whose outcome is not already determined yields UNKNOWN, surfaced to
callers as HorizonExceeded. Boolean connectives follow Kleene logic.
"""

import numpy as np

from ..logic.syntax import And, Atom, Compare, Embed, InRegion, Not, Prob, TrueF, Until, free_vars
from .trace import PathAssignment, Trace

FALSE, UNKNOWN, TRUE = np.int8(0), np.int8(1), np.int8(2)

_GRID_EPS = 1e-9


class HorizonExceeded(Exception):
    """The window of a temporal operator extends past the sampled horizon and
    the truncated observation does not determine the result."""


class UnboundPathVariable(KeyError):
    pass


class _Context:
    __slots__ = ("times", "end", "kind", "dt", "assignment", "n", "shared_trace")

    def __init__(self, times, end, kind, dt, assignment, shared_trace=None):
        self.times = times
        self.end = end
        self.kind = kind
        self.dt = dt
        self.assignment = assignment
        self.n = len(times)
        self.shared_trace = shared_trace  # timeline taken verbatim from here


def _build_context(f, assignment: PathAssignment) -> _Context:
    fv = free_vars(f)
    missing = [v for v in fv if v not in assignment]
    if missing:
        raise UnboundPathVariable(f"path variables not bound: {sorted(missing)}")
    traces = [assignment[v] for v in sorted(fv)] or list(assignment.bindings.values())
    if not traces:
        raise ValueError("evaluation requires at least one bound trace")
    end = min(tr.horizon for tr in traces)
    if all(tr.kind == Trace.GRID for tr in traces):
        dts = {tr.dt for tr in traces}
        if len(dts) == 1:
            dt = dts.pop()
            n = min(tr.n_segments for tr in traces)
            times = np.arange(n) * dt
            return _Context(times, min(end, n * dt), "grid", dt, assignment)
    distinct = {id(tr): tr for tr in traces if tr.kind == Trace.EVENT}
    if len(distinct) == 1 and all(tr.kind == Trace.EVENT for tr in traces):
        tr = next(iter(distinct.values()))
        return _Context(tr.times, end, "event", None, assignment, shared_trace=tr)
    times = np.unique(np.concatenate([np.asarray(tr.start_times()) for tr in traces]))
    times = times[times < end]
    return _Context(times, end, "event", None, assignment)


def _bool_to_truth(mask) -> np.ndarray:
    return np.where(mask, TRUE, FALSE).astype(np.int8)


def _atom_vector(name, var, ctx: _Context) -> np.ndarray:
    if var not in ctx.assignment:
        raise UnboundPathVariable(f"path variable not bound: {var}")
    tr = ctx.assignment[var]
    if tr.kind == Trace.GRID:
        if name not in tr.label_arrays:
            mask = np.zeros(ctx.n, dtype=bool)
        elif ctx.kind == "grid":
            mask = tr.label_arrays[name][:ctx.n]
        else:
            idx = np.minimum((ctx.times / tr.dt + _GRID_EPS).astype(np.int64), tr.n_segments - 1)
            mask = tr.label_arrays[name][idx]
    else:
        seg_has = tr.label_mask(name)
        if ctx.shared_trace is tr:
            mask = seg_has
        else:
            idx = np.searchsorted(tr.times, ctx.times, side="right") - 1
            mask = seg_has[idx]
    return _bool_to_truth(mask)


def _suffix_first(mask: np.ndarray, n: int) -> np.ndarray:
    """first_index[k] = min index m >= k with mask[m], else n (length n+1)."""
    idx = np.where(mask, np.arange(n), n)
    out = np.empty(n + 1, dtype=np.int64)
    out[n] = n
    if n:
        out[:n] = np.minimum.accumulate(idx[::-1])[::-1]
    return out


def _until_vector(L: np.ndarray, R: np.ndarray, lo: float, hi: float, ctx: _Context) -> np.ndarray:
    n = ctx.n
    t = ctx.times
    idx = np.arange(n)

    first_nonT_L = _suffix_first(L != TRUE, n)[:n]
    first_F_L = _suffix_first(L == FALSE, n)[:n]
    next_T_R = _suffix_first(R == TRUE, n)
    next_nonF_R = _suffix_first(R != FALSE, n)

    if ctx.kind == "grid":
        lo_off = int(np.ceil(lo / ctx.dt - _GRID_EPS))
        jlo = np.minimum(idx + lo_off, n)
        if np.isinf(hi):
            jhi = np.full(n, n - 1)
            trunc = np.ones(n, dtype=bool)
        else:
            hi_off = int(np.floor(hi / ctx.dt + _GRID_EPS))
            raw = idx + hi_off
            trunc = (t + hi) >= ctx.end
            jhi = np.minimum(raw, n - 1)
        virtual_T = np.zeros(n, dtype=bool)
        virtual_poss = np.zeros(n, dtype=bool)
    else:
        a = t + lo
        jlo = np.searchsorted(t, a, side="left")
        if np.isinf(hi):
            jhi = np.full(n, n - 1)
            trunc = np.ones(n, dtype=bool)
        else:
            b = t + hi
            jhi = np.searchsorted(t, b, side="right") - 1
            trunc = b >= ctx.end
        # window start as an extra candidate when it falls inside a segment
        seg_a = np.minimum(np.searchsorted(t, a, side="right") - 1, n - 1)
        strict = (t[seg_a] < a) & (a < ctx.end)
        virtual_T = strict & (R[seg_a] == TRUE) & (first_nonT_L > seg_a)
        virtual_poss = strict & (R[seg_a] != FALSE) & (first_F_L > seg_a)

    j_t = next_T_R[np.minimum(jlo, n)]
    indexed_T = (j_t <= jhi) & (j_t <= first_nonT_L)
    j_p = next_nonF_R[np.minimum(jlo, n)]
    indexed_poss = (j_p <= jhi) & (j_p <= first_F_L)
    future_poss = trunc & (first_F_L == n)

    out = np.where(indexed_T | virtual_T, TRUE,
                   np.where(indexed_poss | virtual_poss | future_poss, UNKNOWN, FALSE))
    return out.astype(np.int8)


def _truth(f, ctx: _Context) -> np.ndarray:
    if isinstance(f, TrueF):
        return np.full(ctx.n, TRUE, dtype=np.int8)
    if isinstance(f, Atom):
        return _atom_vector(f.name, f.pathvar, ctx)
    if isinstance(f, Not):
        return (2 - _truth(f.child, ctx)).astype(np.int8)
    if isinstance(f, And):
        return np.minimum(_truth(f.left, ctx), _truth(f.right, ctx))
    if isinstance(f, Until):
        return _until_vector(_truth(f.left, ctx), _truth(f.right, ctx), f.lo, f.hi, ctx)
    if isinstance(f, (Embed, Compare, InRegion, Prob)):
        raise ValueError("path evaluation requires a probability-free formula")
    raise TypeError(f"not a path formula: {f!r}")


def eval_path(f, assignment: PathAssignment, t: float = 0.0) -> bool:
    """Truth of a quantifier-free path formula at shift t over the assignment."""
    ctx = _build_context(f, assignment)
    at = assignment.base_shift + t
    if not (0.0 <= at < ctx.end):
        raise HorizonExceeded(f"evaluation time {at} outside the observed [0, {ctx.end})")
    vec = _truth(f, ctx)
    k = int(np.searchsorted(ctx.times, at + (_GRID_EPS if ctx.kind == "grid" else 0.0),
                            side="right")) - 1
    v = vec[k]
    if v == UNKNOWN:
        raise HorizonExceeded("result depends on behaviour past the sampled horizon")
    return bool(v == TRUE)


def eval_quantifier_free(f, traces, order) -> bool:
    """Bind order[i] -> traces[i] and evaluate at time 0."""
    order = list(order)
    if len(traces) != len(order):
        raise ValueError(f"{len(order)} path variables but {len(traces)} traces")
    fv = free_vars(f)
    if fv != frozenset(order):
        raise ValueError(f"binding order {order} does not match free variables {sorted(fv)}")
    return eval_path(f, PathAssignment(dict(zip(order, traces))), 0.0)
