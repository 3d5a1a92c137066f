import logging
import math
from typing import Optional

import numpy as np
from scipy import linalg

from sysid.bounds import formulas
from sysid.bounds.beta0 import solve_beta0
from sysid.bounds.constants import BoundConstants, check_delta
from sysid.bounds.psi import estimate_psi
from sysid.errors import PreconditionError
from sysid.estimation.diagnostics import gap_bound
from sysid.linalg.gramian import gramian, log_trace_gramian
from sysid.linalg.outbox import OutboxNorms, outbox_phi
from sysid.linalg.spectral import eigenvalues
from sysid.models.reports import NotationTable
from sysid.models.system import SystemSpec
from sysid.utils.types import FloatArray, as_matrix

__all__ = [
    "ExplosiveFactors",
    "explosive_factors",
    "in_Tu",
    "lower_bound_requirements",
    "notation_quantities",
    "scan_Tu",
]

logger = logging.getLogger(__name__)


def in_Tu(A: FloatArray, T: int, delta: float, phi_min: float, psi: float, sigma_max_P: float) -> bool:
    """
    Membership of T in the set T_u(δ): the gap bound with the 1/δ factor stays below φ_min² ψ² / (2 σ_max(P)²)

    Here ψ is the anti-concentration level at δ, so it already carries the δ factor.
    """
    return gap_bound(A, T, delta) <= formulas.Tu_threshold(phi_min, psi, sigma_max_P)


def scan_Tu(
    A: FloatArray, delta: float, phi_min: float, psi: float, sigma_max_P: float, T_max: int
) -> Optional[int]:
    """
    Smallest T* such that every T in [T*, T_max] lies in T_u(δ)

    Membership may hold sporadically below T*, these horizons are not reported.

    Returns:
        Optional[int]: T*, None when T_max itself is not a member
    """
    if T_max < 1:
        raise PreconditionError(f"T_max must be positive, got {T_max}")
    members = [in_Tu(A, T, delta, phi_min, psi, sigma_max_P) for T in range(1, T_max + 1)]
    if not members[-1]:
        return None
    last_outside = max((index for index, member in enumerate(members) if not member), default=-1)
    return last_outside + 2


class ExplosiveFactors:
    """
    φ, ψ̂ and the eigenvector quantities of an explosive system with known Jordan structure

    Args:
        system (SystemSpec): The system, its Jordan structure must be known
        T (int): Horizon
        constants (BoundConstants): ψ sampling and outbox grid settings
    """

    def __init__(self, system: SystemSpec, T: int, constants: BoundConstants) -> None:
        structure = system.jordan_structure()
        if structure is None:
            raise PreconditionError("The Jordan structure of A is unknown")
        self.system = system
        self.T = T
        self.constants = constants
        self.jordan, self.eigenvectors = structure
        self.outbox: OutboxNorms = outbox_phi(self.jordan, T, constants.outbox_grid)
        singular_values = linalg.svdvals(system.A)
        self.sigma_max_A, self.sigma_min_A = float(singular_values[0]), float(singular_values[-1])
        self.sigma_max_P = float(linalg.svdvals(self.eigenvectors)[0])
        inverse_gramian = gramian(linalg.inv(system.A), T)
        self.trace_PGP = float(np.trace(self.eigenvectors @ inverse_gramian @ self.eigenvectors.conj().T).real)

    def psi(self, delta: float) -> tuple[float, float]:
        return estimate_psi(
            self.system.A,
            self.eigenvectors,
            delta,
            self.constants.psi_samples,
            self.constants.psi_seed,
            self.constants.psi_tail,
        )

    def gamma(self, delta: float, psi: float) -> float:
        """γ(A, δ)"""
        return formulas.gamma_A_delta(
            self.outbox.phi_min,
            self.outbox.phi_max,
            self.sigma_max_A,
            self.sigma_min_A,
            psi,
            delta,
            self.constants.universal_c,
            self.trace_PGP,
        )

    def gamma_e(self, delta: float) -> tuple[float, float, float]:
        """γ_e(A, δ) with the ψ̂ and γ it was built from"""
        psi, _ = self.psi(delta)
        gamma = self.gamma(delta, psi)
        value = formulas.gamma_e(self.system.dim, self.sigma_max_P, self.outbox.phi_min, psi, delta, gamma)
        return value, psi, gamma


def explosive_factors(system: SystemSpec, T: int, constants: BoundConstants) -> Optional[ExplosiveFactors]:
    """ExplosiveFactors when the structure is known and every eigenvalue lies outside the unit circle"""
    if system.jordan_structure() is None or float(np.abs(eigenvalues(system.A)).min()) <= 1.0:
        return None
    return ExplosiveFactors(system, T, constants)


def notation_quantities(
    system: SystemSpec | FloatArray, delta: float, T: int, constants: BoundConstants = BoundConstants()
) -> NotationTable:
    """
    Evaluate every threshold and confidence factor at (δ, T)

    ψ̂, φ, γ(A, δ) and γ_e need an explosive system with known Jordan structure, otherwise they are left empty and
    named in `absent`.

    Examples:
        >>> table = notation_quantities(np.zeros((1, 1)), 0.1, 100)
        >>> round(table.gamma_s, 4)
        6.1428
    """
    delta = check_delta(delta)
    if T < 1:
        raise PreconditionError(f"Horizon must be positive, got {T}")
    system = system if isinstance(system, SystemSpec) else SystemSpec.from_matrix(system)
    A, d, C = system.A, system.dim, constants.universal_C

    log_trace = log_trace_gramian(A, T)
    sigma_min_AA = float(linalg.eigvalsh(A @ A.T)[0])
    c_value = formulas.c_A_delta(log_trace, d, delta, T, C)
    beta0, boundary = solve_beta0(A, delta, T, constants) if sigma_min_AA > 0 else (1.0, True)

    table = dict(
        T=T,
        delta=delta,
        dim=d,
        universal_C=C,
        universal_c=constants.universal_c,
        R=constants.R,
        log_trace_gramian=log_trace,
        T_eta=formulas.T_eta(d, delta, C),
        T_s=formulas.T_s(log_trace, d, delta, C),
        c_A_delta=c_value,
        T_ms=formulas.T_ms(c_value, sigma_min_AA, C),
        beta0=beta0,
        beta0_boundary=boundary,
        gamma_s=formulas.gamma_s(log_trace, d, delta),
        gamma_ms=formulas.gamma_ms(log_trace, d, delta, T),
    )

    factors = explosive_factors(system, T, constants)
    if factors is None:
        return NotationTable(**table, absent=("gamma_e", "gamma_A_delta", "psi_hat", "phi_min", "phi_max"))

    psi_hat, psi_std_err = factors.psi(delta)
    gamma = factors.gamma(delta, psi_hat)
    return NotationTable(
        **table,
        gamma_e=formulas.gamma_e(d, factors.sigma_max_P, factors.outbox.phi_min, psi_hat, delta, gamma),
        gamma_A_delta=gamma,
        psi_hat=psi_hat,
        psi_std_err=psi_std_err,
        phi_min=factors.outbox.phi_min,
        phi_max=factors.outbox.phi_max,
    )


def lower_bound_requirements(
    A: FloatArray, T: int, delta: float, constants: BoundConstants = BoundConstants()
) -> dict[str, float | bool]:
    """
    Conditions under which Y_T ⪰ (T R² / 4) I holds with probability 1 - δ

    T has to exceed both C (log(2/δ) + d log 5) and C R² (d/2 log(tr(Γ_T - I) + 1) + d log(5/δ)), and every
    eigenvalue modulus has to stay below 1 + c/T.
    """
    delta = check_delta(delta)
    A = as_matrix(A, name="A", square=True)
    d, C, R = A.shape[0], constants.universal_C, constants.R
    log_trace = log_trace_gramian(A, T)
    # tr(Γ_T - I) = tr Γ_T - d
    ratio = math.exp(math.log(d) - log_trace)
    log_excess = log_trace + math.log1p(-ratio) if ratio < 1.0 else -math.inf
    noise_floor = C * (math.log(2.0 / delta) + d * math.log(5.0))
    energy_floor = C * R**2 * (d / 2 * formulas.log_one_plus(log_excess) + d * math.log(5.0 / delta))
    rho_max = float(np.abs(eigenvalues(A)).max())
    return {
        "noise_floor": noise_floor,
        "energy_floor": energy_floor,
        "T_ok": T >= max(noise_floor, energy_floor),
        "rho_max": rho_max,
        "rho_ok": rho_max <= 1.0 + constants.universal_c / T,
    }
