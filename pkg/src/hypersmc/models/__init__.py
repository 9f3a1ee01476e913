from .base import ConfigError, PusModel, child_seed, as_seed_sequence, sample_tuple
from .ctmc import CtmcModel, gillespie_sample
from .hybrid import (
    HybridModel,
    HybridTemplate,
    NonfiniteState,
    ZenoGuard,
    hybrid_sample,
    make_template,
    register_template,
)
from .queue import BackServer, Exponential, FrontServer, Mmpp, QueueModel, queue_sample
from .config import RegionDefs, build_region, load_model, model_from_dict

__all__ = [
    "ConfigError", "PusModel", "child_seed", "as_seed_sequence", "sample_tuple",
    "CtmcModel", "gillespie_sample",
    "HybridModel", "HybridTemplate", "NonfiniteState", "ZenoGuard",
    "hybrid_sample", "make_template", "register_template",
    "BackServer", "Exponential", "FrontServer", "Mmpp", "QueueModel", "queue_sample",
    "RegionDefs", "build_region", "load_model", "model_from_dict",
]
