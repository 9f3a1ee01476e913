"""Shape analysis: decide which verification engine a closed formula needs.

Kinds:

* SIMPLE       one probability operator over a quantifier-free body,
               compared against a constant threshold
* JOINT        region membership or arithmetic comparison over one or more
               non-nested probability operators
* NESTED_STATE a closed comparison formula embedded (via ``(..)@var``) inside
               the path body of an outer operator
* NESTED_PATH  probability operators nested inside another operator's body,
               quantifying disjoint path variables

Anything else raises UnsupportedShape. Exact-equality comparisons are
rejected here: a true probability sitting exactly on a test boundary makes
every sequential test non-terminating, so the tool refuses rather than loop.
"""

import enum

from .syntax import (
    Arith,
    Atom,
    Compare,
    Const,
    Embed,
    InRegion,
    Not,
    Prob,
    TrueF,
    And,
    Until,
    free_vars,
    is_quantifier_free,
    is_state_shaped,
    iter_nodes,
)
from ..stats.regions import AbsDiffGE, AbsDiffLE, HalfspaceConj, LowerHalfLine, UpperHalfLine


class AlgorithmKind(enum.Enum):
    SIMPLE = "simple"
    JOINT = "joint"
    NESTED_STATE = "nested_state"
    NESTED_PATH = "nested_path"


class UnsupportedShape(ValueError):
    pass


def const_value(e):
    """Fold a probability expression made only of constants; None otherwise."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Arith):
        vals = [const_value(a) for a in e.args]
        if any(v is None for v in vals):
            return None
        if e.op == "+":
            return vals[0] + vals[1]
        if e.op == "-":
            return vals[0] - vals[1]
        if e.op == "*":
            return vals[0] * vals[1]
        if e.op == "/":
            return vals[0] / vals[1]
        if e.op == "abs":
            return abs(vals[0])
        if e.op == "min":
            return min(vals)
        return max(vals)
    return None


def threshold_split(f):
    """Match ``Prob ~ const`` (either orientation).

    Returns (prob, op, threshold) with op oriented as if the operator were on
    the left, or None when the formula is not threshold-shaped.
    """
    if not isinstance(f, Compare):
        return None
    mirror = {"<": ">", ">": "<", "<=": ">=", ">=": "<=", "=": "="}
    left_c, right_c = const_value(f.left), const_value(f.right)
    if isinstance(f.left, Prob) and right_c is not None:
        return f.left, f.op, right_c
    if isinstance(f.right, Prob) and left_c is not None:
        return f.right, mirror[f.op], left_c
    return None


def prob_leaves(f):
    """Probability operators appearing at expression level of a comparison or
    region formula, deduplicated structurally, in appearance order."""
    leaves = []

    def walk_expr(e):
        if isinstance(e, Prob):
            if e not in leaves:
                leaves.append(e)
        elif isinstance(e, Arith):
            for a in e.args:
                walk_expr(a)

    if isinstance(f, Compare):
        walk_expr(f.left)
        walk_expr(f.right)
    elif isinstance(f, InRegion):
        for e in f.exprs:
            walk_expr(e)
    else:
        raise TypeError(f"expected a comparison or region formula: {f!r}")
    return leaves


def embedded_states(f):
    """Distinct closed embedded formulas below a path formula."""
    out = []
    for node in iter_nodes(f):
        if isinstance(node, Embed) and node.child not in out:
            out.append(node.child)
    return out


def _linear_form(e, leaves):
    """Express e as sum(coeff_i * x_i) + const over the given leaf order.

    Returns (coeffs dict, const) or None when not linear.
    """
    if isinstance(e, Const):
        return {}, e.value
    if isinstance(e, Prob):
        return {leaves.index(e): 1.0}, 0.0
    if isinstance(e, Arith):
        if e.op in ("+", "-"):
            lhs = _linear_form(e.args[0], leaves)
            rhs = _linear_form(e.args[1], leaves)
            if lhs is None or rhs is None:
                return None
            sign = 1.0 if e.op == "+" else -1.0
            coeffs = dict(lhs[0])
            for k, v in rhs[0].items():
                coeffs[k] = coeffs.get(k, 0.0) + sign * v
            return coeffs, lhs[1] + sign * rhs[1]
        if e.op == "*":
            for a, b in ((e.args[0], e.args[1]), (e.args[1], e.args[0])):
                c = const_value(a)
                if c is not None:
                    lf = _linear_form(b, leaves)
                    if lf is None:
                        return None
                    return {k: c * v for k, v in lf[0].items()}, c * lf[1]
            return None
        if e.op == "/":
            c = const_value(e.args[1])
            if c is None or c == 0.0:
                return None
            lf = _linear_form(e.args[0], leaves)
            if lf is None:
                return None
            return {k: v / c for k, v in lf[0].items()}, lf[1] / c
    return None


def _abs_diff_pattern(coeffs, const):
    """Recognize x_i - x_j (unit coefficients, no constant)."""
    if const != 0.0:
        return None
    nz = {k: v for k, v in coeffs.items() if v != 0.0}
    if len(nz) != 2:
        return None
    (i, ci), (j, cj) = sorted(nz.items())
    if ci == 1.0 and cj == -1.0:
        return i, j
    if ci == -1.0 and cj == 1.0:
        return j, i
    return None


def compare_region(f: Compare):
    """Compile a comparison over probability operators into (leaves, Region).

    The region represents the set of leaf-probability vectors satisfying the
    comparison; boundary strictness is immaterial because regions are handled
    as closed sets and boundary truth is excluded by assumption.
    """
    leaves = prob_leaves(f)
    if not leaves:
        raise UnsupportedShape("comparison contains no probability operator")
    n = len(leaves)

    def halfspace_le(coeffs, bound):
        # sum coeffs . x <= bound
        try:
            if n == 1:
                c = coeffs.get(0, 0.0)
                if c > 0:
                    return LowerHalfLine(min(1.0, max(0.0, bound / c)))
                if c < 0:
                    return UpperHalfLine(min(1.0, max(0.0, bound / c)))
                raise UnsupportedShape("comparison does not involve the probability")
            vec = tuple(coeffs.get(k, 0.0) for k in range(n))
            return HalfspaceConj(n, [(vec, bound)])
        except ValueError as exc:
            raise UnsupportedShape(f"degenerate acceptance region: {exc}") from None

    for side, other, ops_le in ((f.left, f.right, ("<", "<=")), (f.right, f.left, (">", ">="))):
        if isinstance(side, Arith) and side.op == "abs":
            c = const_value(other)
            if c is None:
                break
            lf = _linear_form(side.args[0], leaves)
            if lf is None:
                raise UnsupportedShape("absolute value of a non-linear expression")
            coeffs, k0 = lf
            pair = _abs_diff_pattern(coeffs, k0)
            try:
                if f.op in ops_le:
                    if pair is not None:
                        return leaves, AbsDiffLE(n, pair[0], pair[1], c)
                    vec = tuple(coeffs.get(m, 0.0) for m in range(n))
                    neg = tuple(-v for v in vec)
                    return leaves, HalfspaceConj(n, [(vec, c - k0), (neg, c + k0)])
                if pair is not None:
                    return leaves, AbsDiffGE(n, pair[0], pair[1], c)
            except ValueError as exc:
                raise UnsupportedShape(f"degenerate acceptance region: {exc}") from None
            raise UnsupportedShape("lower bound on a general absolute value is not simply connected")

    lhs = _linear_form(f.left, leaves)
    rhs = _linear_form(f.right, leaves)
    if lhs is None or rhs is None:
        raise UnsupportedShape("comparison is not linear in the probability operators")
    coeffs = dict(lhs[0])
    for k, v in rhs[0].items():
        coeffs[k] = coeffs.get(k, 0.0) - v
    bound = rhs[1] - lhs[1]
    if f.op in ("<", "<="):
        return leaves, halfspace_le(coeffs, bound)
    return leaves, halfspace_le({k: -v for k, v in coeffs.items()}, -bound)


def _validate_threshold(p, what="probability threshold"):
    if not (0.0 <= p <= 1.0):
        raise UnsupportedShape(f"{what} must lie in [0, 1], got {p}")


def classify(f) -> AlgorithmKind:
    """Total classification of a closed state formula."""
    if not is_state_shaped(f):
        raise ValueError("classification requires a comparison or region-membership formula")
    fv = free_vars(f)
    if fv:
        raise ValueError(f"classification requires a closed formula, free: {sorted(fv)}")
    for node in iter_nodes(f):
        if isinstance(node, Compare) and node.op == "=":
            raise UnsupportedShape(
                "exact equality cannot be decided statistically (the boundary case never terminates)")

    split = threshold_split(f)
    if split is not None:
        prob, _, p = split
        _validate_threshold(p)
        body = prob.body
        if is_quantifier_free(body):
            return AlgorithmKind.SIMPLE
        if is_state_shaped(body):
            _validate_nested_path(prob, body)
            return AlgorithmKind.NESTED_PATH
        _validate_nested_state_body(body)
        return AlgorithmKind.NESTED_STATE

    # joint-shaped top level
    leaves = prob_leaves(f)
    if not leaves:
        raise UnsupportedShape("formula contains no probability operator")
    if isinstance(f, Compare):
        compare_region(f)  # raises UnsupportedShape when not compilable
    if all(is_quantifier_free(leaf.body) for leaf in leaves):
        return AlgorithmKind.JOINT
    for leaf in leaves:
        if is_state_shaped(leaf.body):
            raise UnsupportedShape(
                "nested probability operators are only supported as a single threshold comparison")
        _validate_nested_state_body(leaf.body)
    return AlgorithmKind.NESTED_STATE


def _validate_nested_path(outer: Prob, body):
    inner = prob_leaves(body)
    if not inner:
        raise UnsupportedShape("nested comparison contains no probability operator")
    for leaf in inner:
        if not is_quantifier_free(leaf.body):
            raise UnsupportedShape("more than two levels of probability nesting")
        if leaf.pathvars & outer.pathvars:
            raise UnsupportedShape("nested operators must quantify disjoint path variables")
    if isinstance(body, Compare):
        compare_region(body)
    if free_vars(body) != outer.pathvars:
        raise UnsupportedShape(
            "the nested comparison must bind exactly the outer operator's path variables")


def _validate_nested_state_body(body):
    embeds = embedded_states(body)
    if not embeds:
        raise UnsupportedShape("operator body mixes probability operators in an unsupported way")
    if len(embeds) > 1:
        raise UnsupportedShape("only one distinct embedded state formula is supported")
    rho = embeds[0]
    inner_kind = classify(rho)
    if inner_kind not in (AlgorithmKind.SIMPLE, AlgorithmKind.JOINT):
        raise UnsupportedShape("embedded state formulas must themselves be non-nested")
    # the rest of the body must be probability-free once embeds are opaque
    def check(node):
        if isinstance(node, Embed):
            return
        if isinstance(node, (TrueF, Atom)):
            return
        if isinstance(node, Not):
            check(node.child)
            return
        if isinstance(node, (And, Until)):
            check(node.left)
            check(node.right)
            return
        raise UnsupportedShape("operator body mixes probability operators in an unsupported way")

    check(body)
