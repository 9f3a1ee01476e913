from .trace import PathAssignment, Trace
from .evaluate import HorizonExceeded, UnboundPathVariable, eval_path, eval_quantifier_free

__all__ = [
    "PathAssignment",
    "Trace",
    "HorizonExceeded",
    "UnboundPathVariable",
    "eval_path",
    "eval_quantifier_free",
]
