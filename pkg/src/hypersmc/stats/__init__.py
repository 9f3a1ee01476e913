from .beta import reg_inc_beta, binom_cdf
from .clopper_pearson import CountStat, cp_significance, cp_for_threshold, joint_significance
from .regions import (
    Box,
    Region,
    BoxProduct,
    LowerHalfLine,
    UpperHalfLine,
    AbsDiffLE,
    AbsDiffGE,
    HalfspaceConj,
    largest_box,
)

__all__ = [
    "reg_inc_beta",
    "binom_cdf",
    "CountStat",
    "cp_significance",
    "cp_for_threshold",
    "joint_significance",
    "Box",
    "Region",
    "BoxProduct",
    "LowerHalfLine",
    "UpperHalfLine",
    "AbsDiffLE",
    "AbsDiffGE",
    "HalfspaceConj",
    "largest_box",
]
