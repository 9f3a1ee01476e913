import json
import math

import numpy as np
import pytest

import _helpers
from hypersmc.logic import parse_formula
from hypersmc.semantics import (
    HorizonExceeded,
    PathAssignment,
    Trace,
    UnboundPathVariable,
    eval_path,
    eval_quantifier_free,
)


def hit_trace(tau, horizon=20.0, label="q"):
    """Label switches on at tau and stays."""
    return Trace.event([0.0, tau], [frozenset(), frozenset({label})], horizon)


def test_atom_lookup():
    tr = Trace.event([0.0, 2.0], [frozenset({"a"}), frozenset()], 10.0)
    f = parse_formula("a@pi")
    assert eval_path(f, PathAssignment({"pi": tr}), 1.0) is True
    assert eval_path(f, PathAssignment({"pi": tr}), 2.0) is False


def test_until_fires_at_first_switch():
    tr = hit_trace(3.2, horizon=10.0, label="a")
    f = parse_formula("(!a@pi) U[0,inf] a@pi")
    assert eval_path(f, PathAssignment({"pi": tr})) is True


def test_window_pair_example():
    V = PathAssignment({"pi1": hit_trace(4.0), "pi2": hit_trace(4.5)})
    tight = parse_formula(
        "(!q@pi1 & !q@pi2) U[0,inf] (q@pi1 & F[0,0.9] q@pi2 | q@pi2 & F[0,0.9] q@pi1)")
    loose = parse_formula(
        "(!q@pi1 & !q@pi2) U[0,inf] (q@pi1 & F[0,0.3] q@pi2 | q@pi2 & F[0,0.3] q@pi1)")
    assert eval_path(tight, V) is True
    assert eval_path(loose, V) is False


def test_cycle_times_within_window():
    # cycle completions at 9.9 and 10.3: within 1.1 of each other
    body = parse_formula(
        "(!q@pi1 & !q@pi2) U[0,inf] (q@pi1 & F[0,1.1] q@pi2 | q@pi2 & F[0,1.1] q@pi1)")
    assert eval_quantifier_free(body, (hit_trace(9.9), hit_trace(10.3)), ["pi1", "pi2"]) is True


def test_eventually_false_when_never():
    tr = Trace.event([0.0], [frozenset()], 5.0)
    f = parse_formula("F[0,2] a@pi")
    assert eval_path(f, PathAssignment({"pi": tr})) is False


def test_true_formula():
    from hypersmc.logic import TrueF
    tr = Trace.event([0.0], [frozenset()], 5.0)
    assert eval_path(TrueF(), PathAssignment({"pi": tr})) is True


def test_unbounded_eventually_false_is_truncation():
    # no witness by the horizon and the future could still provide one
    tr = Trace.event([0.0], [frozenset()], 5.0)
    f = parse_formula("F[0,inf] a@pi")
    with pytest.raises(HorizonExceeded):
        eval_path(f, PathAssignment({"pi": tr}))


def test_unbounded_globally_truncates():
    tr = Trace.event([0.0], [frozenset({"a"})], 5.0)
    f = parse_formula("G[0,inf] a@pi")
    with pytest.raises(HorizonExceeded):
        eval_path(f, PathAssignment({"pi": tr}))


def test_unbounded_until_determined_false():
    # the left side fails before any witness: decided within the horizon
    tr = Trace.event([0.0, 1.0], [frozenset({"a"}), frozenset()], 5.0)
    f = parse_formula("a@pi U[0,inf] b@pi")
    assert eval_path(f, PathAssignment({"pi": tr})) is False


def test_bounded_window_beyond_horizon_truncates():
    tr = Trace.event([0.0], [frozenset({"a"})], 5.0)
    f = parse_formula("a@pi U[0,9] b@pi")
    with pytest.raises(HorizonExceeded):
        eval_path(f, PathAssignment({"pi": tr}))


def test_unbound_variable():
    tr = Trace.event([0.0], [frozenset({"a"})], 5.0)
    with pytest.raises(UnboundPathVariable):
        eval_path(parse_formula("a@other"), PathAssignment({"pi": tr}))


def test_arity_mismatch():
    tr = Trace.event([0.0], [frozenset({"a"})], 5.0)
    with pytest.raises(ValueError):
        eval_quantifier_free(parse_formula("a@pi"), (tr, tr), ["pi"])


def _fuzz_case(rng, max_points=40):
    n = int(rng.integers(6, max_points))
    traces = {"pi1": _helpers.random_grid_trace(rng, n),
              "pi2": _helpers.random_grid_trace(rng, n)}
    budget = (n - 1) * _helpers.GRID_DT
    f = _helpers.random_path_formula(rng, ("pi1", "pi2"), 4, budget * 0.6)
    return f, traces


def test_brute_force_oracle_agreement():
    rng = np.random.default_rng(4242)
    for _ in range(200):
        f, traces = _fuzz_case(rng)
        got = eval_path(f, PathAssignment(traces))
        want = _helpers.oracle_eval(f, traces, 0)
        assert got == want, (f, traces["pi1"].label_arrays, traces["pi2"].label_arrays)


def test_negation_duality():
    from hypersmc.logic import Not
    rng = np.random.default_rng(11)
    for _ in range(150):
        f, traces = _fuzz_case(rng)
        V = PathAssignment(traces)
        assert eval_path(Not(f), V) == (not eval_path(f, V))


def test_shift_composition():
    rng = np.random.default_rng(12)
    for _ in range(150):
        f, traces = _fuzz_case(rng)
        V = PathAssignment(traces)
        t1, t2 = _helpers.GRID_DT, 2 * _helpers.GRID_DT
        try:
            direct = eval_path(f, V, t1 + t2)
        except HorizonExceeded:
            continue
        assert direct == eval_path(f, V.shift(t1), t2)


def test_monotone_window():
    rng = np.random.default_rng(13)
    for _ in range(100):
        n = int(rng.integers(8, 30))
        traces = {"pi": _helpers.random_grid_trace(rng, n)}
        V = PathAssignment(traces)
        h1 = float(rng.integers(1, 4)) * _helpers.GRID_DT
        h2 = h1 + float(rng.integers(1, 4)) * _helpers.GRID_DT
        if h2 >= (n - 1) * _helpers.GRID_DT:
            continue
        a = parse_formula(f"F[0,{h1}] a@pi")
        b = parse_formula(f"F[0,{h2}] a@pi")
        if eval_path(a, V):
            assert eval_path(b, V)


def test_event_window_start_inside_segment():
    # witness exactly at the window start, which is not a segment boundary
    tr1 = hit_trace(1.0, horizon=20.0, label="q1")
    tr2 = hit_trace(3.5, horizon=20.0, label="q2")
    V = PathAssignment({"pi1": tr1, "pi2": tr2})
    f = parse_formula("(!q1@pi1 & !q2@pi2) U[0,inf] (q1@pi1 & F[2.0,inf] q2@pi2)")
    assert eval_path(f, V) is True
    g = parse_formula("(!q1@pi1 & !q2@pi2) U[0,inf] (q1@pi1 & F[4.0,inf] q2@pi2)")
    # q2 switched at 3.5 < 1.0+4.0 but stays on, so the delayed window still sees it
    assert eval_path(g, V) is True
    # with a finite pulse instead, the delayed window sees nothing within the
    # horizon and the unbounded tail stays unobserved: truncation, not false
    tr2b = Trace.event([0.0, 3.5, 4.0],
                       [frozenset(), frozenset({"q2"}), frozenset()], 20.0)
    Vb = PathAssignment({"pi1": tr1, "pi2": tr2b})
    with pytest.raises(HorizonExceeded):
        eval_path(g, Vb)


def test_dump_and_json():
    tr = Trace.event([0.0, 1.5], [frozenset(), frozenset({"a"})], 4.0,
                     values=[{"x": 0.0}, {"x": 2.5}])
    dumped = tr.dump().splitlines()
    assert dumped[0] == "t=0 labels={} values={x:0}"
    assert dumped[1] == "t=1.5 labels={a} values={x:2.5}"
    doc = json.loads(tr.to_json())
    assert doc["kind"] == "event" and doc["horizon"] == 4.0
    assert doc["segments"][1] == {"t": 1.5, "labels": ["a"], "values": {"x": 2.5}}


def test_assignment_shift_validation():
    tr = Trace.event([0.0], [frozenset({"a"})], 5.0)
    with pytest.raises(ValueError):
        PathAssignment({"pi": tr}, base_shift=6.0)
    shifted = PathAssignment({"pi": tr}).shift(2.0)
    assert shifted.base_shift == 2.0
    assert shifted.common_horizon() == 5.0


def test_trace_validation():
    with pytest.raises(ValueError):
        Trace.event([0.5], [frozenset()], 2.0)  # first segment not at 0
    with pytest.raises(ValueError):
        Trace.event([0.0, 1.0, 1.0], [frozenset()] * 3, 2.0)  # not increasing
    with pytest.raises(ValueError):
        Trace.event([0.0, 3.0], [frozenset()] * 2, 2.0)  # past horizon
    with pytest.raises(ValueError):
        Trace.grid(0.5, {"a": np.ones(10, dtype=bool)}, horizon=2.0)  # grid too long


def grid_to_event(tr):
    """Same piecewise-constant signal re-expressed as an event trace."""
    times = np.arange(tr.n_segments) * tr.dt
    labelsets = [frozenset(k for k, arr in tr.label_arrays.items() if arr[i])
                 for i in range(tr.n_segments)]
    return Trace.event(times, labelsets, tr.horizon)


def test_event_path_agrees_with_oracle():
    # the event-kind until evaluation must match the brute-force oracle too;
    # re-express fuzzed grid traces as event traces with identical signals
    rng = np.random.default_rng(777)
    for _ in range(150):
        f, traces = _fuzz_case(rng)
        event_traces = {k: grid_to_event(tr) for k, tr in traces.items()}
        got = eval_path(f, PathAssignment(event_traces))
        want = _helpers.oracle_eval(f, traces, 0)
        assert got == want, f


def test_grid_assignment_mixed_with_event():
    # a grid and an event trace evaluate together on the union timeline
    g = Trace.grid(0.5, {"a": np.array([False, False, True, True])}, horizon=2.0)
    e = Trace.event([0.0, 0.7], [frozenset(), frozenset({"b"})], 2.0)
    V = PathAssignment({"pi1": g, "pi2": e})
    assert eval_path(parse_formula("F[0,1.5] (a@pi1 & b@pi2)"), V) is True
