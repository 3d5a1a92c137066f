import logging

import numpy as np
from scipy import linalg
from scipy.special import logsumexp

from sysid.errors import NumericError, PreconditionError, SingularMatrixError
from sysid.utils.types import ComplexArray, FloatArray, as_matrix

__all__ = ["gramian", "gramian_ratio_bound_check", "log_trace_gramian"]

logger = logging.getLogger(__name__)


def gramian(A: FloatArray, t: int) -> FloatArray:
    """
    The Gramian Γ_t(A) = Σ_{k=0}^t A^k A^k'

    The sum over n terms G(n) is built by binary doubling, G(2n) = G(n) + A^n G(n) A^n' and
    G(n + 1) = I + A G(n) A', so only O(log t) products are needed.

    Args:
        A (FloatArray): Square matrix
        t (int): Last power included, t >= 0

    Returns:
        FloatArray: Symmetric positive definite d x d matrix

    Raises:
        NumericError: The Gramian leaves the double range, use `log_trace_gramian` instead

    Examples:
        >>> gramian(np.array([[2.0]]), 2)
        array([[21.]])
    """
    A = as_matrix(A, name="A", square=True)
    if t < 0:
        raise PreconditionError(f"Gramian horizon must be non-negative, got {t}")
    d = A.shape[0]
    terms = t + 1
    result = np.zeros((d, d))
    power = np.eye(d)
    with np.errstate(over="ignore", invalid="ignore"):
        for bit in bin(terms)[2:]:
            result = result + power @ result @ power.T
            power = power @ power
            if bit == "1":
                result = np.eye(d) + A @ result @ A.T
                power = A @ power
    if not np.all(np.isfinite(result)):
        raise NumericError("Gramian overflowed, evaluate its trace in the log domain", {"t": t, "dim": d})
    return 0.5 * (result + result.T)


def log_trace_gramian(A: FloatArray, t: int) -> float:
    """
    log tr Γ_t(A) without overflow

    The powers A^k are carried as a unit-norm matrix times a running log-scale, and the trace is summed with
    logsumexp over log ‖A^k‖_F².
    """
    A = as_matrix(A, name="A", square=True)
    if t < 0:
        raise PreconditionError(f"Gramian horizon must be non-negative, got {t}")
    d = A.shape[0]
    log_terms = np.empty(t + 1)
    log_terms[0] = np.log(d)
    direction = np.eye(d) / np.sqrt(d)
    log_scale = 0.5 * np.log(d)
    for k in range(1, t + 1):
        direction = A @ direction
        norm = float(np.linalg.norm(direction))
        if norm == 0.0:
            log_terms = log_terms[:k]
            break
        direction /= norm
        log_scale += np.log(norm)
        log_terms[k] = 2.0 * log_scale
    return float(logsumexp(log_terms))


def gramian_ratio_bound_check(
    A: FloatArray, t1: int, t2: int, eigenvectors: ComplexArray | None = None
) -> tuple[float, bool]:
    """
    Largest eigenvalue of Γ_{t1} Γ_{t2}^{-1} against the polynomial bound κ(P)² d β^{d²}, β = t1 / t2

    Args:
        A (FloatArray): Square matrix
        t1 (int): Longer horizon
        t2 (int): Shorter horizon, at least 8d
        eigenvectors (ComplexArray, optional): P with A = P⁻¹ Λ P. Taken from an eigendecomposition when omitted,
            so defective matrices need it passed from their Jordan structure.

    Returns:
        tuple[float, bool]: λ₁ and whether it respects the bound

    Raises:
        SingularMatrixError: The eigenvector matrix is singular, so κ(P) is undefined
    """
    A = as_matrix(A, name="A", square=True)
    d = A.shape[0]
    if not t1 > t2 >= 8 * d:
        raise PreconditionError(f"Need t1 > t2 >= 8d = {8 * d}, got t1={t1}, t2={t2}")

    longer, shorter = gramian(A, t1), gramian(A, t2)
    lambda1 = float(linalg.eigh(longer, shorter, eigvals_only=True)[-1])

    if eigenvectors is None:
        _, eigenvectors = linalg.eig(A)
    with np.errstate(over="ignore", divide="ignore"):
        condition = float(np.linalg.cond(eigenvectors))
    if not np.isfinite(condition) or condition > 1.0 / np.finfo(np.float64).eps:
        raise SingularMatrixError(
            "Eigenvector matrix is singular, pass the eigenvectors of the Jordan structure",
            {"dim": d, "condition": condition},
        )
    bound = condition**2 * d * (t1 / t2) ** (d * d)
    return lambda1, lambda1 <= bound
