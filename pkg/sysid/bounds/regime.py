import logging
import math
from typing import Optional

import numpy as np
from scipy import linalg

from sysid.bounds import formulas
from sysid.bounds.constants import BoundConstants, check_delta
from sysid.bounds.notation import ExplosiveFactors, notation_quantities, scan_Tu
from sysid.errors import IrregularSystemError, PreconditionError, RegimeError
from sysid.linalg.gramian import gramian, log_trace_gramian
from sysid.linalg.spectral import SpectralReport, spectral_report
from sysid.models.reports import BlockBound, BoundReport, LowerBound
from sysid.models.system import SystemSpec
from sysid.utils.types import FloatArray, RegimeClass, as_matrix

__all__ = ["RATE_CLASSES", "log_norm_power", "minimax_lower_bound_1d", "regime_error_bound", "regime_label"]

logger = logging.getLogger(__name__)

RATE_CLASSES = {
    RegimeClass.STABLE: "1/sqrt(T)",
    RegimeClass.MARGINAL: "1/T",
    RegimeClass.EXPLOSIVE: "rho^-T",
}
MIXED_RATE = "mixed-polylog"


def regime_label(report: SpectralReport) -> str:
    """Classes present joined by "+", e.g. "S0+S2" """
    return "+".join(sorted(regime.value for regime in report.overall))


def log_norm_power(M: FloatArray, k: int) -> float:
    """log σ_max(M^k), computed with renormalized powers so it never overflows or underflows"""
    M = as_matrix(M, name="M", square=True)
    direction = np.eye(M.shape[0])
    log_scale = 0.0
    for _ in range(k):
        direction = M @ direction
        norm = float(np.linalg.norm(direction))
        if norm == 0.0:
            return -math.inf
        direction /= norm
        log_scale += math.log(norm)
    return log_scale + math.log(float(np.linalg.norm(direction, 2)))


def minimax_lower_bound_1d(a: float, delta: float, T: int, C: float = 1.0) -> LowerBound:
    """
    Lower bound on |a - â| holding with probability at least δ for the scalar system x_{t+1} = a x_t + η_{t+1}

    When C a² T² a^{-T} > δ² (branch 1) the bound is C(1 - a⁻²) δ / (-a² (log δ)³), otherwise (branch 2) it is
    C(1 - a⁻²) a^{-T} / (-δ log δ). The branch test is evaluated in the log domain.

    Examples:
        >>> minimax_lower_bound_1d(1.5, 0.05, 200).branch
        2
        >>> minimax_lower_bound_1d(1.5, 0.05, 20).branch
        1
    """
    delta = check_delta(delta)
    if a < 1.1:
        raise PreconditionError(f"The minimax lower bound is stated for a >= 1.1, got {a}")
    log_a = math.log(a)
    shrink = 1.0 - a**-2
    if math.log(C) + 2 * log_a + 2 * math.log(T) - T * log_a > 2 * math.log(delta):
        return LowerBound(value=C * shrink * delta / (-(a**2) * math.log(delta) ** 3), branch=1)
    return LowerBound(value=C * shrink / (-delta * math.log(delta)) * math.exp(-T * log_a), branch=2)


def _stable_bound(A: FloatArray, delta: float, T: int, constants: BoundConstants) -> tuple[float, float]:
    d, C = A.shape[0], constants.universal_C
    log_trace = log_trace_gramian(A, T)
    bound = math.sqrt(C / T) * formulas.gamma_s(log_trace, d, delta / 4)
    min_T = max(formulas.T_eta(d, delta / 4, C), formulas.T_s(log_trace, d, delta / 4, C))
    return bound, min_T


def _marginal_bound(
    A: FloatArray, delta: float, T: int, constants: BoundConstants, beta0: float
) -> tuple[float, float]:
    d, C = A.shape[0], constants.universal_C
    log_trace = log_trace_gramian(A, T)
    shrunk = delta / (3 * T)
    sigma_min_AA = float(linalg.eigvalsh(A @ A.T)[0])
    c_value = formulas.c_A_delta(log_trace, d, delta / 2, T, C)
    min_T = max(
        2 * formulas.T_eta(d, shrunk, C),
        2 * formulas.T_s(log_trace, d, shrunk, C),
        formulas.T_ms(c_value, sigma_min_AA, C),
    )
    k = max(1, math.floor(1.0 / beta0))
    sigma_min_gramian = float(linalg.eigvalsh(gramian(A, k))[0])
    sigma_max_inverse = float(linalg.svdvals(linalg.inv(A))[0])
    gamma = formulas.gamma_ms(log_trace, d, delta / 2, T)
    return C * sigma_max_inverse / math.sqrt(T * sigma_min_gramian) * gamma**2, min_T


def _explosive_bound(
    system: SystemSpec, delta: float, T: int, constants: BoundConstants
) -> tuple[float, float, bool, list[str]]:
    """Bound, T*, membership of T in T_u(δ/5) and notes"""
    notes: list[str] = []
    factors = ExplosiveFactors(system, T, constants)
    shrunk = delta / 5
    gamma_e, psi, _ = factors.gamma_e(shrunk)
    log_bound = math.log(constants.universal_C) + log_norm_power(linalg.inv(system.A), T) + math.log(gamma_e)
    bound = math.exp(log_bound)

    T_star = scan_Tu(system.A, shrunk, factors.outbox.phi_min, psi, factors.sigma_max_P, max(2 * T, 64))
    if T_star is None:
        notes.append(f"T_u(δ/5) has no tail membership up to {max(2 * T, 64)}")
        return bound, math.inf, False, notes
    return bound, float(T_star), T >= T_star, notes


def regime_error_bound(
    system: SystemSpec | FloatArray, delta: float, T: int, constants: BoundConstants = BoundConstants()
) -> BoundReport:
    """
    Finite-time bound on ‖A - Â‖ holding with probability 1 - δ

    Stable systems get sqrt(C/T) γ_s(δ/4). Marginal systems get C σ_max(A⁻¹) γ_ms(δ/2)² / sqrt(T σ_min(Γ_⌊1/β₀⌋)),
    falling back to the stable form when β₀ has no feasible value. Explosive systems get C σ_max(A^{-T}) γ_e(δ/5) and
    need their Jordan structure. Systems mixing classes only get the rate class, plus a bound for each block when
    they were built from a tagged partition.

    Raises:
        IrregularSystemError: A is explosive and irregular, OLS is inconsistent for it
        RegimeError: An explosive bound was requested without a known Jordan structure
    """
    delta = check_delta(delta)
    system = system if isinstance(system, SystemSpec) else SystemSpec.from_matrix(system)
    report = spectral_report(system.A, T, constants.boundary_C)
    label = regime_label(report)
    if RegimeClass.EXPLOSIVE in report.overall and not report.regular:
        raise IrregularSystemError(
            f"A is irregular with explosive eigenvalues (moduli {report.moduli}); OLS is inconsistent for such "
            "systems, no error bound exists"
        )
    if not report.is_pure:
        return _mixed_bound(system, report, label, delta, T, constants)

    notation = notation_quantities(system, delta, T, constants)
    notes: list[str] = []
    regime = next(iter(report.overall))
    lower_bound: Optional[LowerBound] = None
    match regime:
        case RegimeClass.STABLE:
            bound, min_T = _stable_bound(system.A, delta, T, constants)
            min_T_ok = T >= min_T
        case RegimeClass.MARGINAL:
            if notation.beta0_boundary:
                notes.append("β₀ has no feasible value, the stable-form bound is reported")
                bound, min_T = _stable_bound(system.A, delta, T, constants)
            else:
                bound, min_T = _marginal_bound(system.A, delta, T, constants, notation.beta0)
            min_T_ok = T >= min_T
        case _:
            if system.jordan_structure() is None:
                raise RegimeError("The explosive bound needs the Jordan structure of A")
            bound, min_T, min_T_ok, explosive_notes = _explosive_bound(system, delta, T, constants)
            notes.extend(explosive_notes)
            if system.dim == 1 and float(system.A[0, 0]) >= 1.1:
                lower_bound = minimax_lower_bound_1d(float(system.A[0, 0]), delta, T, constants.universal_C)

    if not min_T_ok:
        notes.append(f"T={T} is below the required horizon {min_T:.6g}")
    logger.debug("%s bound at T=%d, δ=%g: %.6g", label, T, delta, bound)
    return BoundReport(
        regime=label,
        rate_class=RATE_CLASSES[regime],
        error_upper_bound=bound,
        min_T=min_T,
        min_T_ok=min_T_ok,
        lower_bound_1d=lower_bound,
        assumptions_violated=tuple(notes),
        notation=notation,
    )


def _mixed_bound(
    system: SystemSpec, report: SpectralReport, label: str, delta: float, T: int, constants: BoundConstants
) -> BoundReport:
    blocks: list[BlockBound] = []
    notes: list[str] = []
    for block in system.partition:
        block_system = SystemSpec.from_jordan(block.jordan)
        try:
            block_report = regime_error_bound(block_system, delta, T, constants)
        except RegimeError as error:
            notes.append(f"block {block.tag.value}: {error}")
            blocks.append(BlockBound(block.tag.value, block_system.dim, "", None, False))
            continue
        blocks.append(
            BlockBound(
                tag=block.tag.value,
                dim=block_system.dim,
                regime=block_report.regime,
                error_upper_bound=block_report.error_upper_bound,
                min_T_ok=block_report.min_T_ok,
            )
        )
    if not system.partition:
        notes.append("no block partition recorded, only the rate class is reported")
    return BoundReport(
        regime=label,
        rate_class=MIXED_RATE,
        error_upper_bound=None,
        min_T=math.nan,
        min_T_ok=bool(blocks) and all(block.min_T_ok for block in blocks),
        assumptions_violated=tuple(notes),
        block_bounds=tuple(blocks),
    )
