"""Turn a classified formula into an executable verification plan.

A leaf is one probability operator: the path variables it samples, the body
to evaluate, and (for nested plans) the outer variables whose traces arrive
fixed per instantiation. Comparisons over several operators compile to a
region over the vector of leaf probabilities.
"""

from dataclasses import dataclass

from ..logic.classify import (
    AlgorithmKind,
    UnsupportedShape,
    classify,
    compare_region,
    embedded_states,
    prob_leaves,
    threshold_split,
)
from ..logic.syntax import (
    And,
    Atom,
    Compare,
    Embed,
    InRegion,
    Not,
    Prob,
    TrueF,
    Until,
)

FRESH_LABEL = "__embedded"


@dataclass(frozen=True)
class LeafSpec:
    order: tuple  # sampled path variables, fixed binding order
    body: object  # quantifier-free formula over order + outer_vars
    outer_vars: tuple = ()


@dataclass(frozen=True)
class SimplePlan:
    leaf: LeafSpec
    op: str  # < <= > >=, threshold on the right
    p: float

    kind = AlgorithmKind.SIMPLE


@dataclass(frozen=True)
class JointPlan:
    leaves: tuple  # tuple[LeafSpec]
    region: object

    kind = AlgorithmKind.JOINT


@dataclass(frozen=True)
class NestedPathPlan:
    outer_vars: tuple
    op: str
    p: float
    inner: object  # SimplePlan or JointPlan whose leaves carry outer_vars

    kind = AlgorithmKind.NESTED_PATH


@dataclass(frozen=True)
class NestedStatePlan:
    rho: object        # the embedded closed state formula
    rho_plan: object   # its SimplePlan/JointPlan
    outer_formula: object  # top formula with the embedding replaced by FRESH_LABEL
    fresh_label: str

    kind = AlgorithmKind.NESTED_STATE


def _leaf(prob: Prob, outer_vars=()) -> LeafSpec:
    return LeafSpec(tuple(sorted(prob.pathvars)), prob.body, tuple(outer_vars))


def _compile_flat(f, region_defs, outer_vars=()):
    """Simple or joint plan for a non-nested comparison/region formula."""
    split = threshold_split(f)
    if split is not None:
        prob, op, p = split
        if not (0.0 <= p <= 1.0):
            raise UnsupportedShape(f"probability threshold must lie in [0, 1], got {p}")
        return SimplePlan(_leaf(prob, outer_vars), op, p)
    if isinstance(f, InRegion):
        leaves = []
        for e in f.exprs:
            if not isinstance(e, Prob):
                raise UnsupportedShape(
                    "region membership requires plain probability operators per coordinate")
            leaves.append(e)
        if region_defs is None:
            raise UnsupportedShape(f"no region definitions available for {f.region!r}")
        region = region_defs.resolve(f.region, len(leaves))
        if region.dimension != len(leaves):
            raise UnsupportedShape(
                f"region {f.region!r} has dimension {region.dimension}, formula supplies {len(leaves)}")
        return JointPlan(tuple(_leaf(l, outer_vars) for l in leaves), region)
    leaves, region = compare_region(f)
    return JointPlan(tuple(_leaf(l, outer_vars) for l in leaves), region)


def substitute_embedding(f, rho, label: str):
    """Replace every embedding of rho by a plain atom carrying ``label``."""
    if isinstance(f, Embed) and f.child == rho:
        return Atom(label, f.pathvar)
    if isinstance(f, Not):
        return Not(substitute_embedding(f.child, rho, label))
    if isinstance(f, And):
        return And(substitute_embedding(f.left, rho, label),
                   substitute_embedding(f.right, rho, label))
    if isinstance(f, Until):
        return Until(substitute_embedding(f.left, rho, label),
                     substitute_embedding(f.right, rho, label), f.lo, f.hi)
    if isinstance(f, (TrueF, Atom)):
        return f
    if isinstance(f, Compare):
        return Compare(_sub_expr(f.left, rho, label), f.op, _sub_expr(f.right, rho, label))
    if isinstance(f, InRegion):
        return InRegion(tuple(_sub_expr(e, rho, label) for e in f.exprs), f.region)
    raise TypeError(f"cannot substitute inside {f!r}")


def _sub_expr(e, rho, label):
    if isinstance(e, Prob):
        return Prob(e.pathvars, substitute_embedding(e.body, rho, label))
    if hasattr(e, "args"):
        return type(e)(e.op, tuple(_sub_expr(a, rho, label) for a in e.args))
    return e


def compile_formula(f, region_defs):
    """Plan for a closed state formula; raises UnsupportedShape as classify does."""
    kind = classify(f)
    if kind == AlgorithmKind.SIMPLE:
        return _compile_flat(f, region_defs)
    if kind == AlgorithmKind.JOINT:
        return _compile_flat(f, region_defs)
    if kind == AlgorithmKind.NESTED_PATH:
        prob, op, p = threshold_split(f)
        inner = _compile_flat(prob.body, region_defs, outer_vars=tuple(sorted(prob.pathvars)))
        return NestedPathPlan(tuple(sorted(prob.pathvars)), op, p, inner)
    # nested state
    if threshold_split(f) is not None:
        bodies = [threshold_split(f)[0].body]
    else:
        bodies = [leaf.body for leaf in prob_leaves(f)]
    rho = None
    for b in bodies:
        for cand in embedded_states(b):
            rho = cand
    rho_plan = compile_formula(rho, region_defs)
    outer = substitute_embedding(f, rho, FRESH_LABEL)
    return NestedStatePlan(rho, rho_plan, outer, FRESH_LABEL)
