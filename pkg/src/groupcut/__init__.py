"""Exact tools for cut-generating functions of the one-row infinite group problem."""

from .compendium import (
    bccz_counterexample_approximant,
    catalog,
    construct,
    drlm_backward_3_slope,
    gmic,
    kf_n_step_mir_psi,
    lookup,
    rlm_dpl1_extreme_3a,
)
from .errors import GroupCutError
from .extremality import extremality_test
from .gridoracle import oracle_check
from .minimality import minimality_test
from .pwl import PwlPeriodic, combine, from_breakpoints, from_pieces

__version__ = "0.1.0"

__all__ = [
    "GroupCutError",
    "PwlPeriodic",
    "bccz_counterexample_approximant",
    "catalog",
    "combine",
    "construct",
    "drlm_backward_3_slope",
    "extremality_test",
    "from_breakpoints",
    "from_pieces",
    "gmic",
    "kf_n_step_mir_psi",
    "lookup",
    "minimality_test",
    "oracle_check",
    "rlm_dpl1_extreme_3a",
]
