"""
Closed-form sample-size thresholds and confidence factors.

Every function takes log tr Γ_T(A) instead of the trace itself so explosive systems stay finite.
"""

import math

import numpy as np

from sysid.bounds.constants import check_delta

__all__ = [
    "T_eta",
    "T_ms",
    "T_s",
    "Tu_threshold",
    "c_A_delta",
    "gamma_A_delta",
    "gamma_e",
    "gamma_ms",
    "gamma_s",
    "log_one_plus",
]

LOG5 = math.log(5.0)


def log_one_plus(log_value: float, factor: float = 1.0) -> float:
    """log(1 + factor * exp(log_value))"""
    return float(np.logaddexp(0.0, math.log(factor) + log_value))


def T_eta(d: int, delta: float, C: float = 1.0) -> float:
    """
    C (log(2/δ) + d log 5)

    Examples:
        >>> round(T_eta(1, 0.1, C=512), 3)
        2357.847
    """
    delta = check_delta(delta)
    return C * (math.log(2.0 / delta) + d * LOG5)


def T_s(log_trace: float, d: int, delta: float, C: float = 1.0) -> float:
    """C (d log(tr Γ_T + 1) + 2d log(5/δ))"""
    delta = check_delta(delta)
    return C * (d * log_one_plus(log_trace) + 2 * d * math.log(5.0 / delta))


def c_A_delta(log_trace: float, d: int, delta: float, T: int, C: float = 1.0) -> float:
    """c(A, δ) = T_s(2δ / 3T)"""
    return T_s(log_trace, d, 2.0 * check_delta(delta) / (3.0 * T), C)


def T_ms(c_value: float, sigma_min_AA: float, C: float = 1.0) -> float:
    """C c(A, δ) / σ_min(AA'), infinite for singular A"""
    if sigma_min_AA <= 0:
        return math.inf
    return C * c_value / sigma_min_AA


def gamma_s(log_trace: float, d: int, delta: float) -> float:
    """
    sqrt(8d (log(5/δ) + ½ log(4 tr Γ_T + 1)))

    Examples:
        >>> round(gamma_s(0.0, 1, 0.1), 4)
        6.1428
    """
    delta = check_delta(delta)
    return math.sqrt(8 * d * (math.log(5.0 / delta) + 0.5 * log_one_plus(log_trace, 4.0)))


def gamma_ms(log_trace: float, d: int, delta: float, T: int) -> float:
    """sqrt(16d log(tr Γ_T + 1) + 32d log(15T / 2δ))"""
    delta = check_delta(delta)
    return math.sqrt(16 * d * log_one_plus(log_trace) + 32 * d * math.log(15.0 * T / (2.0 * delta)))


def gamma_A_delta(
    phi_min: float,
    phi_max: float,
    sigma_max_A: float,
    sigma_min_A: float,
    psi: float,
    delta: float,
    c: float,
    trace_PGP: float,
) -> float:
    """
    γ(A, δ) = 4 φ_max² σ_max²(A) / (φ_min² σ_min²(A) ψ²) (1 + log(1/δ)/c) tr(P Γ_T(A⁻¹) P')

    ψ is the anti-concentration level at δ itself, it already carries the linear δ factor.
    """
    delta = check_delta(delta)
    denominator = phi_min**2 * sigma_min_A**2 * psi**2
    if denominator <= 0:
        return math.inf
    return 4 * phi_max**2 * sigma_max_A**2 / denominator * (1 + math.log(1.0 / delta) / c) * trace_PGP


def gamma_e(d: int, sigma_max_P: float, phi_min: float, psi: float, delta: float, gamma: float) -> float:
    """√d σ_max(P) / (φ_min ψ) sqrt(log(2/δ) + 2 log 5 + log(1 + γ(A, δ)))"""
    delta = check_delta(delta)
    if phi_min * psi <= 0 or not math.isfinite(gamma):
        return math.inf
    return math.sqrt(d) * sigma_max_P / (phi_min * psi) * math.sqrt(math.log(2.0 / delta) + 2 * LOG5 + math.log1p(gamma))


def Tu_threshold(phi_min: float, psi: float, sigma_max_P: float) -> float:
    """φ_min² ψ² / (2 σ_max(P)²), the level the gap bound has to reach"""
    return phi_min**2 * psi**2 / (2.0 * sigma_max_P**2)
