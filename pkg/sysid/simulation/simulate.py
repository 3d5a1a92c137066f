import logging
import math
from typing import Optional

import numpy as np
from scipy import linalg

from sysid.errors import DimensionError, OverflowRiskError, PreconditionError, SingularMatrixError
from sysid.linalg.spectral import eigenvalues
from sysid.models.system import NoiseModel, SystemSpec
from sysid.models.trajectory import Trajectory
from sysid.simulation.noise import make_sampler
from sysid.simulation.rng import stream
from sysid.utils.types import FloatArray, as_matrix

__all__ = [
    "DEFAULT_OVERFLOW_LOG_CAP",
    "augment_control",
    "draw_sequences",
    "predicted_log_magnitude",
    "simulate",
    "simulate_scaled",
    "unscale",
]

logger = logging.getLogger(__name__)

DEFAULT_OVERFLOW_LOG_CAP = 650.0
"""Largest natural log magnitude a simulation may reach, about log(1.8e308) less a safety margin."""


def predicted_log_magnitude(A: FloatArray, T: int) -> float:
    """T log ρ_max(A), zero for non-explosive A"""
    rho_max = float(np.abs(eigenvalues(A)).max())
    return T * math.log(rho_max) if rho_max > 1.0 else 0.0


def augment_control(A: FloatArray, B: FloatArray) -> FloatArray:
    """
    The augmented matrix [[A, B], [0, 0]] of a system with inputs

    Its eigenvalues are those of A together with p zeros.

    Examples:
        >>> augment_control(np.array([[2.0]]), np.array([[1.0]]))
        array([[2., 1.],
               [0., 0.]])
    """
    A = as_matrix(A, name="A", square=True)
    B = as_matrix(B, name="B")
    if B.shape[0] != A.shape[0]:
        raise DimensionError(f"B must have {A.shape[0]} rows, got {B.shape[0]}")
    p = B.shape[1]
    return np.block([[A, B], [np.zeros((p, A.shape[0])), np.zeros((p, p))]])


def draw_sequences(
    spec: SystemSpec, noise: NoiseModel, T: int, rng: np.random.Generator
) -> tuple[FloatArray, Optional[FloatArray]]:
    """
    Noise η_1 .. η_T and, for systems with inputs, i.i.d. standard normal U_0 .. U_{T-1}

    Noises are drawn before inputs so a stream yields the same noise with or without inputs.
    """
    noises = make_sampler(noise, T, spec.dim).sample(rng)
    inputs = rng.standard_normal((T, spec.input_dim)) if spec.has_inputs else None
    return noises, inputs


def _resolve(
    spec: SystemSpec,
    noise: NoiseModel,
    T: int,
    seed: int,
    rng: Optional[np.random.Generator],
    noises: Optional[FloatArray],
    inputs: Optional[FloatArray],
) -> tuple[FloatArray, Optional[FloatArray]]:
    if T < 1:
        raise PreconditionError(f"Horizon must be positive, got {T}")
    rng = rng or stream(seed)
    if noises is None:
        noises, drawn_inputs = draw_sequences(spec, noise, T, rng)
    else:
        noises = np.asarray(noises, dtype=np.float64)
        if noises.size != T * spec.dim:
            raise DimensionError(f"Expected {T} x {spec.dim} noises, got shape {noises.shape}")
        noises = noises.reshape(T, spec.dim)
        drawn_inputs = rng.standard_normal((T, spec.input_dim)) if spec.has_inputs else None
    if inputs is None:
        return noises, drawn_inputs
    inputs = as_matrix(inputs, name="inputs")
    if inputs.shape != (T, spec.input_dim):
        raise DimensionError(f"Expected {T} x {spec.input_dim} inputs, got {inputs.shape}")
    return noises, inputs


def simulate(
    spec: SystemSpec,
    noise: NoiseModel,
    T: int,
    seed: int,
    rng: Optional[np.random.Generator] = None,
    noises: Optional[FloatArray] = None,
    inputs: Optional[FloatArray] = None,
    overflow_log_cap: float = DEFAULT_OVERFLOW_LOG_CAP,
) -> Trajectory:
    """
    Run X_{t+1} = A X_t + B U_t + η_{t+1} for T steps

    Args:
        spec (SystemSpec): The system
        noise (NoiseModel): Noise distribution
        T (int): Number of steps
        seed (int): Seed of the stream when `rng` is not given, recorded in the trajectory
        rng (np.random.Generator, optional): Stream to draw from, e.g. a Monte Carlo cell stream
        noises (FloatArray, optional): Replay these T x d noises instead of drawing
        inputs (FloatArray, optional): Replay these T x p inputs instead of drawing
        overflow_log_cap (float): Refuse when T log ρ_max(A) exceeds this

    Returns:
        Trajectory: States X_0 .. X_T with the noise record

    Raises:
        OverflowRiskError: The states would leave the double range, use `simulate_scaled`

    Examples:
        >>> spec = SystemSpec.from_matrix([[1.0]])
        >>> simulate(spec, NoiseModel.gaussian(), 3, seed=0, noises=np.ones((3, 1))).states.ravel()
        array([0., 1., 2., 3.])
    """
    magnitude = predicted_log_magnitude(spec.A, T)
    if magnitude > overflow_log_cap:
        raise OverflowRiskError(
            f"T log ρ_max = {magnitude:.1f} exceeds the cap {overflow_log_cap}, use simulate_scaled instead",
            {"T": T, "cap": overflow_log_cap},
        )
    noises, inputs = _resolve(spec, noise, T, seed, rng, noises, inputs)

    A = spec.A
    driving = noises if inputs is None or spec.B is None else noises + inputs @ spec.B.T
    states = np.empty((T + 1, spec.dim))
    states[0] = spec.initial_state
    for t in range(T):
        states[t + 1] = A @ states[t] + driving[t]
    return Trajectory(states=states, noises=noises, inputs=inputs, seed=seed, scaled=False)


def simulate_scaled(
    spec: SystemSpec,
    noise: NoiseModel,
    T: int,
    seed: int,
    rng: Optional[np.random.Generator] = None,
    noises: Optional[FloatArray] = None,
    inputs: Optional[FloatArray] = None,
) -> Trajectory:
    """
    Run the scaled recursion z_t = z_{t-1} + A^{-t}(η_t + B U_{t-1}), z_0 = x_0, with z_t = A^{-t} X_t

    X_t is never formed, so explosive systems can be simulated far beyond the double range of X_t. The same stream
    draws the same noise as `simulate`.

    Raises:
        SingularMatrixError: A is not invertible
    """
    noises, inputs = _resolve(spec, noise, T, seed, rng, noises, inputs)
    try:
        A_inv = linalg.inv(spec.A)
    except linalg.LinAlgError as error:
        raise SingularMatrixError("simulate_scaled needs an invertible A") from error

    driving = noises if inputs is None or spec.B is None else noises + inputs @ spec.B.T
    states = np.empty((T + 1, spec.dim))
    states[0] = spec.initial_state
    inverse_power = np.eye(spec.dim)
    for t in range(1, T + 1):
        inverse_power = A_inv @ inverse_power
        states[t] = states[t - 1] + inverse_power @ driving[t - 1]
    return Trajectory(states=states, noises=noises, inputs=inputs, seed=seed, scaled=True)


def unscale(trajectory: Trajectory, A: FloatArray) -> Trajectory:
    """Turn a scaled trajectory back into states X_t = A^t z_t, only sensible while A^T stays representable"""
    if not trajectory.scaled:
        return trajectory
    A = as_matrix(A, name="A", square=True)
    states = np.empty_like(trajectory.states)
    power = np.eye(trajectory.dim)
    for t, z in enumerate(trajectory.states):
        states[t] = power @ z
        power = A @ power
    return Trajectory(
        states=states, noises=trajectory.noises, inputs=trajectory.inputs, seed=trajectory.seed, scaled=False
    )
