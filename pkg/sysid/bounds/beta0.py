import logging
import math

import numpy as np
from scipy import linalg

from sysid.bounds.constants import BoundConstants, check_delta
from sysid.bounds.formulas import c_A_delta
from sysid.errors import PreconditionError
from sysid.linalg.gramian import log_trace_gramian
from sysid.utils.types import FloatArray, as_matrix

__all__ = ["beta0_rhs", "gramian_min_eigenvalues", "solve_beta0"]

logger = logging.getLogger(__name__)


def gramian_min_eigenvalues(A: FloatArray, k_max: int) -> FloatArray:
    """
    σ_min(Γ_k(A)) for k = 1 .. k_max

    Stops early (and returns a shorter array) once the Gramian is no longer finite.
    """
    A = as_matrix(A, name="A", square=True)
    d = A.shape[0]
    values = np.empty(k_max)
    power = np.eye(d)
    total = np.eye(d)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(k_max):
            power = A @ power
            total = total + power @ power.T
            if not np.all(np.isfinite(total)):
                logger.debug("Gramian overflowed at k=%d, β₀ scan stops there", k + 1)
                return values[:k]
            values[k] = linalg.eigvalsh(total)[0] if d > 1 else total[0, 0]
    return values


def beta0_rhs(A: FloatArray, delta: float, T: int, constants: BoundConstants) -> float:
    """16e c(A, δ) / (T R² σ_min(AA'))"""
    A = as_matrix(A, name="A", square=True)
    sigma_min_AA = float(linalg.eigvalsh(A @ A.T)[0])
    if sigma_min_AA <= 0:
        raise PreconditionError("β₀ needs σ_min(AA') > 0")
    c_value = c_A_delta(log_trace_gramian(A, T), A.shape[0], delta, T, constants.universal_C)
    return 16 * math.e * c_value / (T * constants.R**2 * sigma_min_AA)


def solve_beta0(A: FloatArray, delta: float, T: int, constants: BoundConstants = BoundConstants()) -> tuple[float, bool]:
    """
    β₀(δ) = inf{β : β² σ_min(Γ_⌊1/β⌋(A)) >= 16e c(A, δ) / (T R² σ_min(AA'))}

    On the cell 1/(k+1) < β <= 1/k the floor equals k, so the cell holds feasible points exactly when
    h(k) = σ_min(Γ_k) / k² reaches the right hand side, and then its smallest one is
    max(sqrt(rhs / σ_min(Γ_k)), 1/(k+1)). Larger k give smaller β, so the answer lies in the largest feasible cell,
    found by bisection on the non-increasing envelope max_{j >= k} h(j).

    Args:
        A (FloatArray): Square matrix with σ_min(AA') > 0
        delta (float): Confidence level
        T (int): Horizon
        constants (BoundConstants): C, R, tolerance and scan limit

    Returns:
        tuple[float, bool]: β₀ and whether it is a boundary value (no feasible cell, β₀ = 1)
    """
    check_delta(delta)
    rhs = beta0_rhs(A, delta, T, constants)
    k_max = int(min(T, constants.beta0_scan_cap))
    sigmas = gramian_min_eigenvalues(A, k_max)
    k = np.arange(1, sigmas.size + 1)
    envelope = np.maximum.accumulate((sigmas / k**2)[::-1])[::-1]

    # envelope is non-increasing, count the leading cells at or above rhs
    feasible = int(np.searchsorted(-envelope, -rhs, side="right"))
    if feasible == 0:
        logger.debug("β₀ has no feasible cell, rhs=%.3g", rhs)
        return 1.0, True
    if feasible == sigmas.size and sigmas.size == k_max < T:
        logger.debug("β₀ scan hit its cap of %d cells", k_max)
    k_star = feasible
    tol = constants.beta0_tol
    beta0 = max(math.sqrt(rhs / sigmas[k_star - 1]), (1.0 + tol) / (k_star + 1))
    return min(beta0, 1.0), False
