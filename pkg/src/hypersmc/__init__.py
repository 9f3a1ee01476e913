"""Statistical model checking of probabilistic hyperproperties for
continuous-time stochastic systems: a small logic with path variables and
probability operators, three sampleable model families (continuous-time
Markov chains, hybrid automata with random parameters, queueing networks),
and sequential verification engines built on exact Clopper-Pearson
significance levels."""

from .logic import (
    AlgorithmKind,
    FormulaSyntaxError,
    UnsupportedShape,
    classify,
    free_vars,
    load_formula_file,
    parse_formula,
    parse_state_formula,
    print_formula,
)
from .semantics import HorizonExceeded, PathAssignment, Trace, eval_path, eval_quantifier_free
from .models import (
    ConfigError,
    CtmcModel,
    HybridModel,
    QueueModel,
    gillespie_sample,
    hybrid_sample,
    load_model,
    queue_sample,
    sample_tuple,
)
from .stats import (
    binom_cdf,
    cp_for_threshold,
    cp_significance,
    joint_significance,
    largest_box,
    reg_inc_beta,
)
from .smc import (
    FALSE,
    TRUE,
    UNDECIDED,
    InfiniteStateSpace,
    SmcConfig,
    Verdict,
    verify,
    verify_joint,
    verify_nested_path,
    verify_nested_state,
    verify_simple,
)

__version__ = "0.1.0"
