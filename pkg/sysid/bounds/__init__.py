# ruff: noqa: F401
from .beta0 import solve_beta0
from .constants import BoundConstants
from .notation import in_Tu, lower_bound_requirements, notation_quantities, scan_Tu
from .psi import estimate_psi
from .regime import minimax_lower_bound_1d, regime_error_bound

__all__ = [
    "BoundConstants",
    "estimate_psi",
    "in_Tu",
    "lower_bound_requirements",
    "minimax_lower_bound_1d",
    "notation_quantities",
    "regime_error_bound",
    "scan_Tu",
    "solve_beta0",
]
