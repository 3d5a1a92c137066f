import logging
import math
from typing import Optional

import numpy as np
from scipy import linalg

from sysid.errors import DimensionError, PreconditionError, SingularMatrixError
from sysid.estimation.ols import scaled_sums
from sysid.linalg.gramian import gramian
from sysid.models.reports import CovarianceDiagnostics
from sysid.models.trajectory import Trajectory
from sysid.utils.types import FloatArray, as_matrix

__all__ = ["explosive_pair", "gap_bound", "selfnorm_statistic", "symmetric_inverse_sqrt", "tight_gap_bound"]

logger = logging.getLogger(__name__)

EIGENVALUE_FLOOR = 1e-14


def symmetric_inverse_sqrt(M: FloatArray) -> FloatArray:
    """M^{-1/2} of a symmetric positive definite M, eigenvalues floored at 1e-14 λ_max"""
    values, vectors = linalg.eigh(0.5 * (M + M.T))
    values = np.maximum(values, EIGENVALUE_FLOOR * max(values[-1], 0.0))
    if values[-1] <= 0:
        raise PreconditionError("Matrix is not positive definite")
    return np.asarray((vectors / np.sqrt(values)) @ vectors.T)


def selfnorm_statistic(YT: FloatArray, ST: FloatArray, V: FloatArray) -> float:
    """
    ‖(Y_T + V)^{-1/2} S_T‖

    Args:
        YT (FloatArray): Covariance Y_T
        ST (FloatArray): Martingale term S_T
        V (FloatArray): Symmetric positive definite regularizer

    Examples:
        >>> selfnorm_statistic(np.zeros((2, 2)), np.diag([3.0, 1.0]), np.eye(2))
        3.0
    """
    YT, ST, V = as_matrix(YT, name="YT", square=True), as_matrix(ST, name="ST"), as_matrix(V, name="V", square=True)
    if YT.shape != V.shape or ST.shape[0] != YT.shape[0]:
        raise DimensionError(f"Incompatible shapes Y_T {YT.shape}, S_T {ST.shape}, V {V.shape}")
    if not np.allclose(V, V.T) or linalg.eigvalsh(0.5 * (V + V.T))[0] <= 0:
        raise PreconditionError("V must be symmetric positive definite")
    return float(np.linalg.norm(symmetric_inverse_sqrt(YT + V) @ ST, 2))


def _scaled_states(trajectory: Trajectory, A_inv: FloatArray) -> FloatArray:
    if trajectory.scaled:
        return trajectory.states
    states = np.empty_like(trajectory.states)
    inverse_power = np.eye(trajectory.dim)
    for t, x in enumerate(trajectory.states):
        states[t] = inverse_power @ x
        inverse_power = A_inv @ inverse_power
    return states


def _increments(trajectory: Trajectory, z: FloatArray, A_inv: FloatArray) -> FloatArray:
    """z_t - z_{t-1} for t = 1 .. T, from the noise record when there are no inputs"""
    if trajectory.noises is None or trajectory.inputs is not None:
        return np.diff(z, axis=0)
    increments = np.empty_like(trajectory.noises)
    inverse_power = np.eye(trajectory.dim)
    for t, noise in enumerate(trajectory.noises):
        inverse_power = A_inv @ inverse_power
        increments[t] = inverse_power @ noise
    return increments


def explosive_pair(trajectory: Trajectory, A: FloatArray) -> CovarianceDiagnostics:
    """
    U_T = Σ_{t=1}^T A^{-T} X_t X_t' A^{-T}' and its surrogate F_T = Σ_{t=1}^T A^{-(T-t)} z_T z_T' A^{-(T-t)}'

    Both are formed from z_t = A^{-t} X_t. The difference is accumulated as
    Σ A^{-(T-t)} (δ_t z_t' + z_T δ_t') A^{-(T-t)}' with δ_t = z_t - z_T = -Σ_{τ>t} A^{-τ} η_τ, so a gap far below
    ‖U_T‖ times the machine epsilon is still resolved.

    Args:
        trajectory (Trajectory): Scaled or unscaled trajectory
        A (FloatArray): The true, invertible dynamics

    Returns:
        CovarianceDiagnostics: U_T, F_T, the gap and the smallest eigenvalues
    """
    A = as_matrix(A, name="A", square=True)
    try:
        A_inv = linalg.inv(A)
    except linalg.LinAlgError as error:
        raise SingularMatrixError("explosive_pair needs an invertible A") from error

    z = _scaled_states(trajectory, A_inv)
    increments = _increments(trajectory, z, A_inv)
    T, d = trajectory.T, trajectory.dim
    # deviations[t - 1] = z_t - z_T for t = 1 .. T
    tail_sums = np.cumsum(increments[::-1], axis=0)[::-1]
    deviations = -np.vstack([tail_sums[1:], np.zeros((1, d))])

    states_images = np.empty((T, d))
    final_images = np.empty((T, d))
    deviation_images = np.empty((T, d))
    inverse_power = np.eye(d)
    for t in range(T, 0, -1):
        states_images[t - 1] = inverse_power @ z[t]
        final_images[t - 1] = inverse_power @ z[T]
        deviation_images[t - 1] = inverse_power @ deviations[t - 1]
        inverse_power = A_inv @ inverse_power

    UT = states_images.T @ states_images
    FT = final_images.T @ final_images
    cross = deviation_images.T @ states_images
    gap = cross + final_images.T @ deviation_images
    gap_opnorm = float(np.linalg.norm(0.5 * (gap + gap.T), 2))

    selfnorm_value = math.nan
    if trajectory.noises is not None and trajectory.inputs is None:
        scaled_trajectory = trajectory
        if not trajectory.scaled:
            scaled_trajectory = Trajectory(states=z, noises=trajectory.noises, seed=trajectory.seed, scaled=True)
        covariance, martingale, power_T = scaled_sums(scaled_trajectory, A)
        # V = I in the original coordinates, it may underflow here
        whitening = symmetric_inverse_sqrt(covariance + power_T @ power_T.T)
        selfnorm_value = float(np.linalg.norm(whitening @ martingale, 2))

    return CovarianceDiagnostics(
        UT=UT,
        FT=FT,
        gap_opnorm=gap_opnorm,
        lambda_min_YT=float(linalg.eigvalsh(UT)[0]),
        lambda_min_FT=float(linalg.eigvalsh(FT)[0]),
        selfnorm_value=selfnorm_value,
    )


def gap_bound(A: FloatArray, T: int, delta: float, c: Optional[float] = None) -> float:
    """
    Upper bound on ‖U_T - F_T‖ holding with probability 1 - δ

    4T² σ₁²(A^{-⌊(T+1)/2⌋}) tr Γ_T(A⁻¹) + f T tr(A^{-T-1} Γ_T(A⁻¹) A^{-T-1}'), where f = 1/δ (Markov form) or
    f = 1 + log(1/δ)/c when the constant c is given.
    """
    if not 0 < delta < 1:
        raise PreconditionError(f"delta must lie in (0, 1), got {delta}")
    A = as_matrix(A, name="A", square=True)
    try:
        A_inv = linalg.inv(A)
    except linalg.LinAlgError as error:
        raise SingularMatrixError("gap_bound needs an invertible A") from error
    inverse_gramian = gramian(A_inv, T)
    half_power = np.linalg.matrix_power(A_inv, (T + 1) // 2)
    full_power = np.linalg.matrix_power(A_inv, T + 1)
    factor = 1.0 / delta if c is None else 1.0 + math.log(1.0 / delta) / c
    leading = 4.0 * T**2 * np.linalg.norm(half_power, 2) ** 2 * np.trace(inverse_gramian)
    tail = factor * T * np.trace(full_power @ inverse_gramian @ full_power.T)
    return float(leading + tail)


def tight_gap_bound(A: FloatArray, T: int, delta: float, c: float = 1.0) -> float:
    """`gap_bound` with the (1 + log(1/δ)/c) factor in place of 1/δ"""
    return gap_bound(A, T, delta, c=c)
