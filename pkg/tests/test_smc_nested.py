import numpy as np
import pytest

import _helpers
from hypersmc.logic import parse_formula
from hypersmc.models import CtmcModel, QueueModel, BackServer, Exponential, FrontServer
from hypersmc.models.base import child_seed
from hypersmc.semantics import eval_quantifier_free
from hypersmc.smc import FALSE, TRUE, UNDECIDED, InfiniteStateSpace, SmcConfig, verify


def two_state_chain():
    # b first holds after an exponential(2.3) delay from the initial state
    return CtmcModel([[-2.3, 2.3], [0.0, 0.0]], 0, {1: {"b"}})


RHO = "(P{pi}(F[0,1] b@pi) < 0.95)"


def test_nested_state_relabels_like_brute_force():
    model = two_state_chain()
    # brute-force per-state estimation of the embedded formula
    brute = {}
    for s in range(2):
        sub = model.with_initial(s)
        body = parse_formula("F[0,1] b@pi")
        hits = sum(
            eval_quantifier_free(body, (sub.sample(child_seed(1000 + s, i), 6.0),), ["pi"])
            for i in range(100_000))
        brute[s] = hits / 100_000 < 0.95
    assert brute == {0: True, 1: False}  # p0 = 1 - e^-2.3 = 0.8997, p1 = 1

    f = parse_formula(f"P{{pi}}(F[0,2] {RHO}@pi) > 0.7")
    v = verify(model, f, SmcConfig(alpha=0.03, horizon=6.0, seed=5))
    assert v.algorithm == "nested_state"
    labelled = {entry["state"]: entry["holds"] for entry in v.iterations
                if "state" in entry}
    assert labelled == brute
    assert v.outcome == TRUE  # the initial state itself carries the label


def test_nested_state_alpha_split():
    model = two_state_chain()
    f = parse_formula(f"P{{pi}}(F[0,2] {RHO}@pi) > 0.7")
    v = verify(model, f, SmcConfig(alpha=0.03, horizon=6.0, seed=6))
    # two states plus the outer run, each at 0.03/3 = 0.01
    per_phase = [entry["alpha"] for entry in v.iterations if "state" in entry]
    assert all(a <= 0.01 for a in per_phase)
    assert v.alpha <= 0.03


def test_nested_state_every_state_labelled_reduces_to_plain():
    # delayed window keeps both per-state probabilities strictly below the
    # threshold, so every state is labelled and the outer check is immediate
    model = CtmcModel([[-1.0, 1.0], [1.0, -1.0]], 0, {1: {"b"}})
    rho = "(P{pi}(F[0.5,1] b@pi) < 0.99)"
    f = parse_formula(f"P{{pi}}(F[0,2] {rho}@pi) > 0.8")
    v = verify(model, f, SmcConfig(alpha=0.03, horizon=8.0, seed=7))
    labelled = [entry["holds"] for entry in v.iterations if "state" in entry]
    assert labelled == [True, True]
    assert v.outcome == TRUE


def test_nested_state_requires_enumerable_states():
    qm = QueueModel([FrontServer(Exponential(5.0), 10.0, 10)], [BackServer(1.0, 3)])
    f = parse_formula("P{pi}(F[0,2] (P{pi}(F[0,1] q1@pi) < 0.5)@pi) > 0.5")
    with pytest.raises(InfiniteStateSpace):
        verify(qm, f, SmcConfig(alpha=0.05, horizon=5.0, seed=1))


def test_nested_state_inner_undecided_propagates():
    # embedded threshold sits exactly on a state's probability: that state's
    # run cannot decide and the budget converts it into undecided
    model = CtmcModel([[-2.0, 1.0, 1.0], [0, 0, 0], [0, 0, 0]], 0, {1: {"b"}})
    rho = "(P{pi}(F[0,inf] b@pi) < 0.5)"
    f = parse_formula(f"P{{pi}}(F[0,1] {rho}@pi) > 0.3")
    v = verify(model, f, SmcConfig(alpha=0.05, horizon=8.0, seed=2, max_samples=500))
    assert v.outcome == UNDECIDED


NESTED_COIN = "P{pi1}(P{pi2}(F[0,inf] heads@pi2 & F[0,inf] start@pi1) < 0.5)"


def test_nested_path_two_level_coin():
    # the inner probability is 0.2 for every outer instantiation, so the
    # outer probability is exactly 1
    coin = _helpers.coin_ctmc(0.2)
    v = verify(coin, parse_formula(NESTED_COIN + " >= 0.9"),
               SmcConfig(alpha=0.05, horizon=8.0, seed=3))
    assert v.algorithm == "nested_path"
    assert v.outcome == TRUE
    # the same ground truth read against the strict upper comparison
    v2 = verify(coin, parse_formula(NESTED_COIN + " < 0.9"),
                SmcConfig(alpha=0.05, horizon=8.0, seed=4))
    assert v2.outcome == FALSE


def test_nested_path_schedule_recorded():
    coin = _helpers.coin_ctmc(0.2)
    v = verify(coin, parse_formula(NESTED_COIN + " >= 0.5"),
               SmcConfig(alpha=0.05, horizon=8.0, seed=5))
    assert v.outcome == TRUE
    log = v.iterations
    assert log[0]["alpha1"] == 0.05 and log[0]["c"] == 1
    # the schedule moved at least one of the two knobs every iteration
    for a, b in zip(log, log[1:]):
        assert b["c"] == a["c"] + 1 or b["alpha1"] == a["alpha1"] / 2


def test_nested_path_determinism():
    coin = _helpers.coin_ctmc(0.2)
    cfg = SmcConfig(alpha=0.05, horizon=8.0, seed=11)
    f = parse_formula(NESTED_COIN + " >= 0.5")
    a = verify(coin, f, cfg)
    b = verify(coin, f, cfg)
    assert (a.outcome, a.alpha, a.samples) == (b.outcome, b.alpha, b.samples)


def test_nested_path_undecided_on_boundary():
    # inner probabilities sit exactly on the inner threshold: inner runsral
    # never reach their levels and the budget runs out
    coin = _helpers.coin_ctmc(0.5)
    f = parse_formula(
        "P{pi1}(P{pi2}(F[0,inf] heads@pi2 & F[0,inf] start@pi1) < 0.5) >= 0.5")
    v = verify(coin, f, SmcConfig(alpha=0.05, horizon=8.0, seed=6, max_samples=800))
    assert v.outcome == UNDECIDED
