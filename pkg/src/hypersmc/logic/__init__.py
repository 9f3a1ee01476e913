from .syntax import (
    And,
    Arith,
    Atom,
    Compare,
    Const,
    Embed,
    Formula,
    InRegion,
    Not,
    Prob,
    ProbExpr,
    TrueF,
    Until,
    eventually,
    f_or,
    free_vars,
    globally,
    implies,
    is_quantifier_free,
    is_state_formula,
    is_state_shaped,
)
from .parser import (
    FormulaSyntaxError,
    load_formula_file,
    parse_formula,
    parse_state_formula,
    print_formula,
)
from .classify import AlgorithmKind, UnsupportedShape, classify

__all__ = [
    "And", "Arith", "Atom", "Compare", "Const", "Embed", "Formula", "InRegion",
    "Not", "Prob", "ProbExpr", "TrueF", "Until",
    "eventually", "f_or", "free_vars", "globally", "implies",
    "is_quantifier_free", "is_state_formula", "is_state_shaped",
    "FormulaSyntaxError", "load_formula_file", "parse_formula",
    "parse_state_formula", "print_formula",
    "AlgorithmKind", "UnsupportedShape", "classify",
]
