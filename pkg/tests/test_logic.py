import math

import numpy as np
import pytest

import _helpers
from hypersmc.logic import (
    AlgorithmKind,
    And,
    Arith,
    Atom,
    Compare,
    Const,
    Embed,
    FormulaSyntaxError,
    InRegion,
    Not,
    Prob,
    TrueF,
    UnsupportedShape,
    Until,
    classify,
    eventually,
    f_or,
    free_vars,
    globally,
    implies,
    parse_formula,
    parse_state_formula,
    print_formula,
)

SENS = ("P{pi1,pi2} ((!q@pi1 & !q@pi2) U[0,inf] "
        "(q@pi1 & F[0,0.9] q@pi2 | q@pi2 & F[0,0.9] q@pi1)) >= 0.95")
NESTED = "P{pi1}(P{pi2}(a@pi1 U[0,5] b@pi2) < 0.5) < 0.1"
FAIRNESS = ("P{pi1}(abs(P{pi2}((!q1@pi1 & !q2@pi2) U[0,inf] (q1@pi1 & F[5.0,inf] q2@pi2))"
            " - P{pi2}((!q1@pi1 & !q2@pi2) U[0,inf] (q2@pi2 & F[5.0,inf] q1@pi1))) <= 0.5)"
            " >= 0.5")
EX1 = ("P{pi2}((!s2@pi2) U[0,inf] (s2@pi2 & (s2@pi2 U[0,1] s1@pi2))) - "
       "P{pi1}((!s1@pi1) U[0,inf] (s1@pi1 & (s1@pi1 U[0,1] s0@pi1))) > 0.05")


def test_parse_sensitivity_shape():
    f = parse_formula(SENS)
    q1, q2 = Atom("q", "pi1"), Atom("q", "pi2")
    body = Until(
        And(Not(q1), Not(q2)),
        f_or(And(q1, eventually(q2, 0.0, 0.9)), And(q2, eventually(q1, 0.0, 0.9))),
        0.0, math.inf)
    assert f == Compare(Prob(frozenset({"pi1", "pi2"}), body), ">=", Const(0.95))


def test_parse_globally_desugars():
    f = parse_formula("P{pi} (G[0,inf] a@pi) >= 1")
    expected = Compare(
        Prob(frozenset({"pi"}), Not(Until(TrueF(), Not(Atom("a", "pi")), 0.0, math.inf))),
        ">=", Const(1.0))
    assert f == expected


def test_parse_nested_structure():
    f = parse_formula(NESTED)
    assert isinstance(f, Compare)
    outer = f.left
    assert isinstance(outer, Prob) and outer.pathvars == frozenset({"pi1"})
    inner_cmp = outer.body
    assert isinstance(inner_cmp, Compare)
    assert inner_cmp.left.pathvars == frozenset({"pi2"})


def test_print_until():
    f = Until(Atom("a", "pi"), Atom("b", "pi"), 0.0, math.inf)
    assert print_formula(f) == "a@pi U[0,inf] b@pi"


def test_examples_round_trip():
    for text in (SENS, NESTED, FAIRNESS, EX1, "P{pi} (G[0,inf] a@pi) >= 1"):
        f = parse_formula(text)
        assert parse_formula(print_formula(f)) == f


def test_fuzzed_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(300):
        f = _helpers.random_ast_formula(rng, depth=6)
        text = print_formula(f)
        assert parse_formula(text) == f, text


def test_desugar_identities():
    a, b = Atom("a", "pi"), Atom("b", "pi")
    assert eventually(a, 0.0, 2.0) == Until(TrueF(), a, 0.0, 2.0)
    assert globally(a, 0.0, 2.0) == Not(Until(TrueF(), Not(a), 0.0, 2.0))
    assert f_or(a, b) == Not(And(Not(a), Not(b)))
    assert implies(a, b) == Not(And(Not(Not(a)), Not(b)))


def test_free_vars_examples():
    assert free_vars(parse_formula("a@pi1 & b@pi2")) == frozenset({"pi1", "pi2"})
    body = parse_formula("(!q@pi1 & !q@pi2) U[0,inf] (q@pi1 & F[0,1] q@pi2)")
    assert free_vars(Prob(frozenset({"pi1", "pi2"}), body)) == frozenset()
    inner = Prob(frozenset({"pi2"}), parse_formula("a@pi1 U[0,2] b@pi2"))
    assert free_vars(inner) == frozenset({"pi1"})


def _fv_reference(node):
    """Independent recomputation of the free-variable rules."""
    if isinstance(node, (TrueF, Const)):
        return frozenset()
    if isinstance(node, Atom):
        return frozenset({node.pathvar})
    if isinstance(node, Embed):
        return frozenset({node.pathvar})
    if isinstance(node, Not):
        return _fv_reference(node.child)
    if isinstance(node, (And, Until)):
        return _fv_reference(node.left) | _fv_reference(node.right)
    if isinstance(node, Compare):
        return _fv_reference(node.left) | _fv_reference(node.right)
    if isinstance(node, InRegion):
        out = frozenset()
        for e in node.exprs:
            out = out | _fv_reference(e)
        return out
    if isinstance(node, Prob):
        return _fv_reference(node.body) - node.pathvars
    if isinstance(node, Arith):
        out = frozenset()
        for e in node.args:
            out = out | _fv_reference(e)
        return out
    raise TypeError(node)


def test_free_vars_fuzzed():
    rng = np.random.default_rng(21)
    for _ in range(300):
        f = _helpers.random_ast_formula(rng, depth=6)
        assert free_vars(f) == _fv_reference(f)


def test_classify_examples():
    assert classify(parse_formula(SENS)) == AlgorithmKind.SIMPLE
    assert classify(parse_formula(EX1)) == AlgorithmKind.JOINT
    assert classify(parse_formula(FAIRNESS)) == AlgorithmKind.NESTED_PATH
    assert classify(parse_formula(NESTED)) == AlgorithmKind.NESTED_PATH
    embedded = parse_formula("P{pi}(F[0,2] (P{pi}(F[0,1] b@pi) < 0.9)@pi) > 0.7")
    assert classify(embedded) == AlgorithmKind.NESTED_STATE


def test_classify_rejects_equality():
    with pytest.raises(UnsupportedShape):
        classify(parse_formula("P{pi}(F[0,1] a@pi) = 0.5"))
    # the conditional-probability fixture parses but cannot be checked
    cond = parse_formula(
        "P{pi}(F[0,inf] (a1@pi & a2@pi)) / P{pi}(F[0,inf] a2@pi) = 0.5")
    with pytest.raises(UnsupportedShape):
        classify(cond)


def test_classify_rejects_triple_nesting():
    f = parse_formula("P{pi1}(P{pi2}(P{pi3}(a@pi1 & b@pi2 & a@pi3) < 0.1) < 0.5) < 0.9")
    with pytest.raises(UnsupportedShape):
        classify(f)


def test_classify_threshold_range():
    with pytest.raises(UnsupportedShape):
        classify(parse_formula("P{pi}(F[0,1] a@pi) < 1.5"))


def test_classify_total_on_fuzzed_closed():
    rng = np.random.default_rng(5)
    seen = set()
    for _ in range(500):
        f = _helpers.random_ast_state(rng, 3, closed=True)
        if free_vars(f):
            continue
        try:
            seen.add(classify(f))
        except UnsupportedShape:
            seen.add("unsupported")
    assert AlgorithmKind.SIMPLE in seen or AlgorithmKind.JOINT in seen


def test_syntax_error_position():
    with pytest.raises(FormulaSyntaxError) as err:
        parse_formula("P{pi}(a@pi U[0,inf b@pi) < 0.5")
    assert "line 1" in str(err.value)


def test_unbound_variable_rejected():
    with pytest.raises(FormulaSyntaxError) as err:
        parse_state_formula("P{pi1}(a@pi1 & b@pi2) < 0.5")
    assert "unbound" in str(err.value) or "pi2" in str(err.value)


def test_empty_window_rejected():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("P{pi}(a@pi U[1,1] b@pi) < 0.5")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("P{pi}(a@pi U[3,2] b@pi) < 0.5")


def test_trivial_quantification_rejected():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("P{pi1,pi2}(a@pi1) < 0.5")


def test_state_formula_required_for_files():
    with pytest.raises(FormulaSyntaxError):
        parse_state_formula("a@pi U[0,1] b@pi")
