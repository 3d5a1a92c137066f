import itertools
import logging
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, qmc

from sysid.errors import PreconditionError, SingularMatrixError
from sysid.linalg.jordan import JordanSpec, jordan_inverse_power
from sysid.utils.types import ComplexArray, FloatArray

__all__ = ["OutboxNorms", "outbox_phi", "default_grid_density"]

logger = logging.getLogger(__name__)

POWER_TAIL_TOL = 1e-18
"""Powers Λ^{-k} whose squared norm falls below this fraction of the accumulated sum are dropped."""

CHUNK_SIZE = 65_536


@dataclass(frozen=True)
class OutboxNorms:
    """
    Grid estimates of φ_min and φ_max

    φ_min is an upper-biased estimate (a minimum over finitely many directions) and φ_max a lower-biased one.

    Attributes:
        phi_min (float): min over the unit outbox of σ_min(K(v))
        phi_max (float): max over the unit sphere of σ_max(K(v))
        n_directions (int): Directions evaluated for each norm, signs included
        grid_density (int): Quasi-random directions per sign pattern
    """

    phi_min: float
    phi_max: float
    n_directions: int
    grid_density: int


def default_grid_density(d: int) -> int:
    """64^min(d, 3) directions"""
    return int(64 ** min(d, 3))


def _power_moments(spec: JordanSpec, T: int) -> ComplexArray:
    """
    M[a, b, i, j] = Σ_{k<T} (Λ^{-k})[a, i] conj((Λ^{-k})[b, j])

    so that Σ_k Λ^{-k} v v' Λ^{-k}ᴴ = Σ_{ij} v_i v_j M[:, :, i, j] for real v.
    """
    d = spec.dim
    step = jordan_inverse_power(spec, 1)
    power = np.eye(d, dtype=np.complex128)
    moments = np.zeros((d, d, d, d), dtype=np.complex128)
    total = 0.0
    for k in range(T):
        moments += np.einsum("ai,bj->abij", power, power.conj())
        size = float(np.sum(np.abs(power) ** 2))
        total += size
        if size < POWER_TAIL_TOL * total:
            logger.debug("outbox power series truncated after %d of %d terms", k + 1, T)
            break
        power = step @ power
    return moments


def _extreme_eigenvalues(moments: ComplexArray, directions: FloatArray) -> tuple[float, float]:
    """Smallest and largest eigenvalue of Σ_k Λ^{-k} v v' Λ^{-k}ᴴ over the rows v of `directions`"""
    smallest, largest = np.inf, 0.0
    for start in range(0, directions.shape[0], CHUNK_SIZE):
        chunk = directions[start : start + CHUNK_SIZE]
        grams = np.einsum("ni,nj,abij->nab", chunk, chunk, moments)
        grams = 0.5 * (grams + np.conj(np.swapaxes(grams, 1, 2)))
        values = np.linalg.eigvalsh(grams)
        smallest = min(smallest, float(values[:, 0].min()))
        largest = max(largest, float(values[:, -1].max()))
    return max(smallest, 0.0), max(largest, 0.0)


def _sign_patterns(d: int) -> FloatArray:
    # v and -v give the same objective, so the first sign is fixed
    tails = itertools.product((1.0, -1.0), repeat=d - 1)
    return np.array([(1.0, *tail) for tail in tails])


def outbox_phi(spec: JordanSpec, T: int, grid_density: int | None = None) -> OutboxNorms:
    """
    φ_min and φ_max of a Jordan structure over horizon T

    With K(v) = [v, Λ⁻¹v, ..., Λ^{-(T-1)}v], φ_min minimizes σ_min(K(v)) over the boundary of the unit outbox
    {v : min_i |v_i| = 1} and φ_max maximizes σ_max(K(v)) over the unit sphere. Both are taken over a scrambled Sobol
    grid of `grid_density` directions in the positive orthant, combined with every sign pattern. The outbox grid always
    contains the all-ones corner.

    Args:
        spec (JordanSpec): Λ, all eigenvalues nonzero
        T (int): Horizon
        grid_density (int, optional): Directions per sign pattern, 64^min(d, 3) by default

    Returns:
        OutboxNorms: The estimates and the grid used

    Examples:
        >>> norms = outbox_phi(JordanSpec.diagonal([2.0]), T=3)
        >>> round(norms.phi_min, 6), round(norms.phi_max, 6)
        (1.145644, 1.145644)
    """
    if T < 1:
        raise PreconditionError(f"Horizon must be positive, got {T}")
    if any(block.eigenvalue == 0 for block in spec.blocks):
        raise SingularMatrixError("Λ is singular: outbox norms need nonzero eigenvalues")
    d = spec.dim
    grid_density = grid_density or default_grid_density(d)

    # Sobol sizes are powers of two
    sobol = qmc.Sobol(d, scramble=True, seed=0)
    samples = sobol.random_base2(int(np.ceil(np.log2(grid_density))))[:grid_density]
    samples = np.clip(samples, 1e-9, 1.0 - 1e-9)
    signs = _sign_patterns(d)

    orthant = np.vstack([np.ones((1, d)), samples / samples.min(axis=1, keepdims=True)])
    box_directions = (signs[:, None, :] * orthant[None, :, :]).reshape(-1, d)

    gaussian = np.abs(norm.ppf(samples))
    sphere = np.vstack([np.eye(d), gaussian]) / np.linalg.norm(np.vstack([np.eye(d), gaussian]), axis=1, keepdims=True)
    sphere_directions = (signs[:, None, :] * sphere[None, :, :]).reshape(-1, d)

    moments = _power_moments(spec, T)
    phi_min = float(np.sqrt(_extreme_eigenvalues(moments, box_directions)[0]))
    phi_max = float(np.sqrt(_extreme_eigenvalues(moments, sphere_directions)[1]))
    return OutboxNorms(
        phi_min=phi_min,
        phi_max=phi_max,
        n_directions=int(box_directions.shape[0]),
        grid_density=grid_density,
    )
