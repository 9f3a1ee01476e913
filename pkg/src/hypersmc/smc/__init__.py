from .config import COUNT_ERROR, COUNT_FALSE, FALSE, TRUE, UNDECIDED, SmcConfig, Verdict
from .compile import (
    JointPlan,
    LeafSpec,
    NestedPathPlan,
    NestedStatePlan,
    SimplePlan,
    compile_formula,
    substitute_embedding,
)
from .engines import (
    InfiniteStateSpace,
    verify,
    verify_joint,
    verify_nested_path,
    verify_nested_state,
    verify_simple,
)

__all__ = [
    "COUNT_ERROR", "COUNT_FALSE", "FALSE", "TRUE", "UNDECIDED",
    "SmcConfig", "Verdict",
    "JointPlan", "LeafSpec", "NestedPathPlan", "NestedStatePlan", "SimplePlan",
    "compile_formula", "substitute_embedding",
    "InfiniteStateSpace", "verify", "verify_joint", "verify_nested_path",
    "verify_nested_state", "verify_simple",
]
