import logging
from typing import Optional

import numpy as np
from scipy import linalg

from sysid.errors import DimensionError, PreconditionError, SingularMatrixError
from sysid.linalg.pinv import pseudo_inverse, pseudo_inverse_with_spectrum
from sysid.models.reports import EstimateReport
from sysid.models.trajectory import Trajectory
from sysid.utils.types import FloatArray, as_matrix

__all__ = ["covariance_and_martingale", "estimation_error", "ols_estimate", "scaled_sums"]

logger = logging.getLogger(__name__)


def estimation_error(A_hat: FloatArray, A: FloatArray) -> float:
    """
    Operator norm ‖A - Â‖

    Examples:
        >>> estimation_error(np.diag([1.3, 0.9]), np.eye(2))
        0.30000000000000004
    """
    A_hat, A = as_matrix(A_hat, name="A_hat"), as_matrix(A, name="A")
    if A_hat.shape != A.shape:
        raise DimensionError(f"Shapes differ: {A_hat.shape} and {A.shape}")
    return float(np.linalg.norm(A - A_hat, 2))


def covariance_and_martingale(trajectory: Trajectory) -> tuple[FloatArray, FloatArray]:
    """
    Y_T = Σ_{t<T} z_t z_t' and S_T = Σ_{t<T} z_t η_{t+1}' for the regressors z_t = X_t (or [X_t, U_t])

    Raises:
        PreconditionError: The trajectory has no noise record or is scaled
    """
    trajectory.require_unscaled()
    noises = trajectory.require_noises()
    regressors = trajectory.regressors()
    return regressors.T @ regressors, regressors.T @ noises


def scaled_sums(trajectory: Trajectory, A: FloatArray) -> tuple[FloatArray, FloatArray, FloatArray]:
    """
    Ũ = Σ_{t<T} A^{-(T-t)} z_t z_t' A^{-(T-t)}' and W = Σ_{t<T} A^{-(T-t)} z_t η_{t+1}' from a scaled trajectory

    These equal A^{-T} Y_T A^{-T}' and A^{-T} S_T without forming X_t.

    Returns:
        tuple[FloatArray, FloatArray, FloatArray]: Ũ, W and A^{-T}
    """
    if trajectory.inputs is not None:
        raise PreconditionError("Scaled estimation does not support control inputs")
    noises = trajectory.require_noises()
    A = as_matrix(A, name="A", square=True)
    try:
        A_inv = linalg.inv(A)
    except linalg.LinAlgError as error:
        raise SingularMatrixError("Scaled estimation needs an invertible A") from error

    T, d = trajectory.T, trajectory.dim
    images = np.empty((T, d))
    inverse_power = np.eye(d)
    for k in range(1, T + 1):
        inverse_power = A_inv @ inverse_power
        images[T - k] = inverse_power @ trajectory.states[T - k]
    return images.T @ images, images.T @ noises, inverse_power


def ols_estimate(
    trajectory: Trajectory,
    true_A: Optional[FloatArray] = None,
    true_B: Optional[FloatArray] = None,
    rel_tol: Optional[float] = None,
) -> EstimateReport:
    """
    Least squares fit of X_{t+1} on X_t (and U_t)

    [Â B̂]' = Z⁺ X_next with the stacked regressor Z whose rows are [X_t, U_t], t = 0 .. T-1. Scaled trajectories are
    fitted through Â' = A' + A^{-T}' Ũ⁺ W, which needs the true A.

    Args:
        trajectory (Trajectory): Data, scaled or not
        true_A (FloatArray, optional): Truth, used for the error and required for scaled trajectories
        true_B (FloatArray, optional): True input matrix, included in the error when given
        rel_tol (float, optional): Pseudo-inverse cutoff, machine epsilon by default

    Returns:
        EstimateReport: Estimate, error and covariance spectrum
    """
    d, p = trajectory.dim, trajectory.input_dim
    if trajectory.scaled:
        if true_A is None:
            raise PreconditionError("A scaled trajectory can only be fitted when the true A is known")
        return _scaled_estimate(trajectory, as_matrix(true_A, name="A", square=True), rel_tol)

    regressors = trajectory.regressors()
    inverse, singular_values, rank = pseudo_inverse_with_spectrum(regressors, rel_tol)
    theta = (inverse @ trajectory.following).T
    A_hat, B_hat = theta[:, :d], (theta[:, d:] if p else None)

    spectrum = np.zeros(d + p)
    spectrum[: singular_values.size] = singular_values**2
    ST = regressors.T @ trajectory.noises if trajectory.noises is not None else np.empty((0, d))

    error = None
    if true_A is not None:
        truth, estimate = as_matrix(true_A, name="A", square=True), A_hat
        if B_hat is not None and true_B is not None:
            truth, estimate = np.hstack([truth, as_matrix(true_B, name="B")]), np.hstack([A_hat, B_hat])
        error = estimation_error(estimate, truth)

    if rank < d + p:
        logger.debug("regressor matrix has rank %d < %d", rank, d + p)
    return EstimateReport(
        A_hat=A_hat,
        B_hat=B_hat,
        error_opnorm=error,
        YT_spectrum=spectrum,
        ST=ST,
        rank_deficient=rank < d + p,
        rank=rank,
    )


def _scaled_estimate(trajectory: Trajectory, A: FloatArray, rel_tol: Optional[float]) -> EstimateReport:
    scaled_covariance, scaled_martingale, inverse_power = scaled_sums(trajectory, A)
    _, singular_values, rank = pseudo_inverse_with_spectrum(scaled_covariance, rel_tol)
    error_transposed = inverse_power.T @ pseudo_inverse(scaled_covariance, rel_tol) @ scaled_martingale
    A_hat = A + error_transposed.T
    return EstimateReport(
        A_hat=A_hat,
        B_hat=None,
        error_opnorm=float(np.linalg.norm(error_transposed, 2)),
        YT_spectrum=singular_values,
        ST=scaled_martingale,
        rank_deficient=rank < trajectory.dim,
        rank=rank,
    )
