import logging
import math

import numpy as np
from scipy import linalg

from sysid.bounds.constants import check_delta
from sysid.errors import RegimeError, SingularMatrixError
from sysid.linalg.spectral import eigenvalues
from sysid.simulation.rng import stream
from sysid.utils.types import ComplexArray, FloatArray, as_matrix

__all__ = ["estimate_psi", "psi_horizon", "sample_min_projection"]

logger = logging.getLogger(__name__)

BOOTSTRAP_KEY = 0xB007
BOOTSTRAP_ROUNDS = 200


def psi_horizon(rho_min: float, tail: float = 1e-12) -> int:
    """Smallest T with ρ_min^{-T} below `tail`"""
    return max(1, math.ceil(math.log(1.0 / tail) / math.log(rho_min)))


def sample_min_projection(
    A: FloatArray, eigenvectors: ComplexArray, n_samples: int, seed: int, tail: float = 1e-12
) -> FloatArray:
    """
    n draws of min_i |(P z_T)_i| with z_T = Σ_{τ=1}^T A^{-τ} η_τ and Gaussian η

    T is chosen so that the omitted tail of the series has weight below `tail`, i.e. z_T is essentially its limit.

    Raises:
        RegimeError: A has an eigenvalue of modulus at most one
    """
    A = as_matrix(A, name="A", square=True)
    rho_min = float(np.abs(eigenvalues(A)).min())
    if rho_min <= 1.0:
        raise RegimeError(f"ψ is defined for explosive systems only, got ρ_min = {rho_min:.6g}")
    try:
        A_inv = linalg.inv(A)
    except linalg.LinAlgError as error:
        raise SingularMatrixError("ψ needs an invertible A") from error

    horizon = psi_horizon(rho_min, tail)
    rng = stream(seed)
    d = A.shape[0]
    z = np.zeros((n_samples, d))
    inverse_power = np.eye(d)
    for _ in range(horizon):
        inverse_power = A_inv @ inverse_power
        z += rng.standard_normal((n_samples, d)) @ inverse_power.T
    logger.debug("ψ sampled %d realizations of z_T with T=%d", n_samples, horizon)
    return np.asarray(np.abs(z @ np.asarray(eigenvectors).T).min(axis=1), dtype=np.float64)


def estimate_psi(
    A: FloatArray, eigenvectors: ComplexArray, delta: float, n_samples: int = 2000, seed: int = 0, tail: float = 1e-12
) -> tuple[float, float]:
    """
    Monte Carlo ψ(A, δ), the δ-quantile of min_i |(P z_T)_i|, with a bootstrap standard error

    Args:
        A (FloatArray): Explosive dynamics
        eigenvectors (ComplexArray): P with A = P⁻¹ Λ P
        delta (float): Probability level
        n_samples (int): Realizations of z_T
        seed (int): Seed of the realizations and of the bootstrap
        tail (float): Weight of the truncated tail of z_T

    Returns:
        tuple[float, float]: ψ̂ and its standard error
    """
    delta = check_delta(delta)
    values = sample_min_projection(A, eigenvectors, n_samples, seed, tail)
    psi_hat = float(np.quantile(values, delta))
    rng = stream(seed, BOOTSTRAP_KEY)
    resamples = rng.choice(values, size=(BOOTSTRAP_ROUNDS, values.size), replace=True)
    std_err = float(np.quantile(resamples, delta, axis=1).std(ddof=1))
    return psi_hat, std_err
