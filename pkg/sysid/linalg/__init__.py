# ruff: noqa: F401
from .gramian import gramian, gramian_ratio_bound_check, log_trace_gramian
from .jordan import JordanBlock, JordanSpec, jordan_block, jordan_inverse_power
from .outbox import OutboxNorms, outbox_phi
from .pinv import pseudo_inverse, pseudo_inverse_with_spectrum
from .spectral import SpectralReport, classify_modulus, is_regular, spectral_report

__all__ = [
    "JordanBlock",
    "JordanSpec",
    "OutboxNorms",
    "SpectralReport",
    "classify_modulus",
    "gramian",
    "gramian_ratio_bound_check",
    "is_regular",
    "jordan_block",
    "jordan_inverse_power",
    "log_trace_gramian",
    "outbox_phi",
    "pseudo_inverse",
    "pseudo_inverse_with_spectrum",
    "spectral_report",
]
