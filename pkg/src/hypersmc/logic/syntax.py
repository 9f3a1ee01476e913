"""Abstract syntax for probabilistic hyperproperty formulas.

Two node families:

* path/state formulas: atoms bound to path variables, boolean connectives,
  timed until, comparisons and region membership of probability expressions,
  and the embedding of a closed comparison formula onto a path variable.
* probability expressions: constants, probability operators quantifying a
  set of path variables over a formula body, and fixed arithmetic
  ({+,-,*,/,abs,min,max}).

Derived operators (or, implies, eventually, globally, true-as-sugar) are
provided as constructors that build the core forms, so structural equality
of two syntaxes for the same formula always holds.
"""

from dataclasses import dataclass
import math


class Formula:
    """Base class for path/state formulas."""

    __slots__ = ()


class ProbExpr:
    """Base class for probability expressions."""

    __slots__ = ()


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str
    pathvar: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula
    lo: float
    hi: float  # math.inf for an unbounded window

    def __post_init__(self):
        if not (0.0 <= self.lo < self.hi):
            raise ValueError(f"until window must satisfy 0 <= lo < hi, got [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class Embed(Formula):
    """A closed comparison/region formula attached to a path variable."""

    child: Formula
    pathvar: str


@dataclass(frozen=True)
class Compare(Formula):
    left: ProbExpr
    op: str  # one of < > <= >= =
    right: ProbExpr

    def __post_init__(self):
        if self.op not in ("<", ">", "<=", ">=", "="):
            raise ValueError(f"unknown comparison operator {self.op!r}")


@dataclass(frozen=True)
class InRegion(Formula):
    exprs: tuple  # tuple[ProbExpr]
    region: str  # name resolved against the model configuration


@dataclass(frozen=True)
class Const(ProbExpr):
    value: float


@dataclass(frozen=True)
class Prob(ProbExpr):
    pathvars: frozenset
    body: Formula


@dataclass(frozen=True)
class Arith(ProbExpr):
    op: str  # + - * / abs min max
    args: tuple  # tuple[ProbExpr]

    def __post_init__(self):
        arity = {"+": 2, "-": 2, "*": 2, "/": 2, "abs": 1, "min": 2, "max": 2}
        if self.op not in arity:
            raise ValueError(f"unknown arithmetic operator {self.op!r}")
        if len(self.args) != arity[self.op]:
            raise ValueError(f"{self.op!r} expects {arity[self.op]} arguments, got {len(self.args)}")


# ---------------------------------------------------------------------------
# derived constructors

def f_or(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return f_or(Not(a), b)


def eventually(f: Formula, lo: float = 0.0, hi: float = math.inf) -> Formula:
    return Until(TrueF(), f, lo, hi)


def globally(f: Formula, lo: float = 0.0, hi: float = math.inf) -> Formula:
    return Not(Until(TrueF(), Not(f), lo, hi))


# ---------------------------------------------------------------------------
# free path variables

def free_vars(node) -> frozenset:
    """Free path variables, for formulas and probability expressions alike."""
    if isinstance(node, (TrueF, Const)):
        return frozenset()
    if isinstance(node, Atom):
        return frozenset((node.pathvar,))
    if isinstance(node, Embed):
        return frozenset((node.pathvar,))
    if isinstance(node, Not):
        return free_vars(node.child)
    if isinstance(node, (And, Until)):
        return free_vars(node.left) | free_vars(node.right)
    if isinstance(node, Compare):
        return free_vars(node.left) | free_vars(node.right)
    if isinstance(node, InRegion):
        out = frozenset()
        for e in node.exprs:
            out |= free_vars(e)
        return out
    if isinstance(node, Prob):
        return free_vars(node.body) - node.pathvars
    if isinstance(node, Arith):
        out = frozenset()
        for e in node.args:
            out |= free_vars(e)
        return out
    raise TypeError(f"not a formula node: {node!r}")


def is_state_shaped(f) -> bool:
    """Comparison or region-membership node; a state formula when also closed."""
    return isinstance(f, (Compare, InRegion))


def is_state_formula(f) -> bool:
    return is_state_shaped(f) and not free_vars(f)


def contains_prob(f) -> bool:
    """True when any probability operator occurs below this node."""
    if isinstance(f, (TrueF, Atom)):
        return False
    if isinstance(f, Not):
        return contains_prob(f.child)
    if isinstance(f, (And, Until)):
        return contains_prob(f.left) or contains_prob(f.right)
    if isinstance(f, (Embed, Compare, InRegion, Prob)):
        return True
    if isinstance(f, Const):
        return False
    if isinstance(f, Arith):
        return any(contains_prob(a) for a in f.args)
    raise TypeError(f"not a formula node: {f!r}")


def is_quantifier_free(f) -> bool:
    """Path formula with no probability operator anywhere below it."""
    return isinstance(f, Formula) and not contains_prob(f)


def iter_nodes(node):
    """All nodes of the tree, preorder."""
    yield node
    if isinstance(node, Not):
        yield from iter_nodes(node.child)
    elif isinstance(node, (And, Until)):
        yield from iter_nodes(node.left)
        yield from iter_nodes(node.right)
    elif isinstance(node, Embed):
        yield from iter_nodes(node.child)
    elif isinstance(node, Compare):
        yield from iter_nodes(node.left)
        yield from iter_nodes(node.right)
    elif isinstance(node, InRegion):
        for e in node.exprs:
            yield from iter_nodes(e)
    elif isinstance(node, Prob):
        yield from iter_nodes(node.body)
    elif isinstance(node, Arith):
        for a in node.args:
            yield from iter_nodes(a)
