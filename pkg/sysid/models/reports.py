from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from sysid.utils.types import FloatArray

__all__ = [
    "BlockBound",
    "BoundReport",
    "CovarianceDiagnostics",
    "EstimateReport",
    "LowerBound",
    "NotationTable",
]


@dataclass(frozen=True, eq=False)
class EstimateReport:
    """
    Result of an OLS fit

    Attributes:
        A_hat (FloatArray): d x d estimate of A
        B_hat (FloatArray, optional): d x p estimate of B when the trajectory has inputs
        error_opnorm (float, optional): ‖A - Â‖ (‖[A B] - [Â B̂]‖ with inputs) when the truth is known
        YT_spectrum (FloatArray): Singular values of Y_T = Σ z_t z_t', descending. For scaled trajectories those of
            A^{-T} Y_T A^{-T}'
        ST (FloatArray): S_T = Σ z_t η_{t+1}' (A^{-T} S_T when scaled), empty without a noise record
        rank_deficient (bool): Y_T is rank deficient at the pseudo-inverse tolerance
        rank (int): Numerical rank of the regressor matrix
    """

    A_hat: FloatArray
    B_hat: Optional[FloatArray]
    error_opnorm: Optional[float]
    YT_spectrum: FloatArray
    ST: FloatArray
    rank_deficient: bool
    rank: int

    @property
    def lambda_min_YT(self) -> float:
        return float(self.YT_spectrum[-1])

    @property
    def joint_estimate(self) -> FloatArray:
        """[Â B̂]"""
        return self.A_hat if self.B_hat is None else np.hstack([self.A_hat, self.B_hat])


@dataclass(frozen=True, eq=False)
class CovarianceDiagnostics:
    """
    Explosive-regime covariance pair U_T, F_T

    Attributes:
        UT (FloatArray): A^{-T} Y_T A^{-T}'
        FT (FloatArray): Σ_{t<T} A^{-t} z_T z_T' A^{-t}'
        gap_opnorm (float): ‖U_T - F_T‖
        lambda_min_YT (float): Smallest eigenvalue of U_T (Y_T itself overflows for long horizons)
        lambda_min_FT (float): Smallest eigenvalue of F_T
        selfnorm_value (float): ‖(U_T + A^{-T}A^{-T}')^{-1/2} A^{-T} S_T‖, the self-normalized term with V = I
    """

    UT: FloatArray
    FT: FloatArray
    gap_opnorm: float
    lambda_min_YT: float
    lambda_min_FT: float
    selfnorm_value: float


@dataclass(frozen=True)
class NotationTable:
    """
    Every sample-size threshold and confidence factor that the regime bounds are built from

    Quantities needing the Jordan structure (ψ, φ, γ_e, γ(A, δ)) are None when it is unknown and listed in `absent`.
    """

    T: int
    delta: float
    dim: int
    universal_C: float
    universal_c: float
    R: float
    log_trace_gramian: float
    T_eta: float
    T_s: float
    c_A_delta: float
    T_ms: float
    beta0: float
    beta0_boundary: bool
    gamma_s: float
    gamma_ms: float
    gamma_e: Optional[float] = None
    gamma_A_delta: Optional[float] = None
    psi_hat: Optional[float] = None
    psi_std_err: Optional[float] = None
    phi_min: Optional[float] = None
    phi_max: Optional[float] = None
    absent: tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class LowerBound:
    """Minimax lower bound for a scalar explosive system and the branch that produced it (1 or 2)"""

    value: float
    branch: int


@dataclass(frozen=True)
class BlockBound:
    """Bound for one block of a composite system, treated as a system of its own"""

    tag: str
    dim: int
    regime: str
    error_upper_bound: Optional[float]
    min_T_ok: bool


@dataclass(frozen=True)
class BoundReport:
    """
    Finite-time error bound for one system, horizon and confidence level

    Attributes:
        regime (str): Classes present, joined with "+" (e.g. "S0" or "S0+S2")
        rate_class (str): One of "1/sqrt(T)", "1/T", "rho^-T", "mixed-polylog"
        error_upper_bound (float, optional): The bound on ‖A - Â‖, None for mixed systems
        min_T (float): Smallest horizon the bound is stated for
        min_T_ok (bool): T reaches `min_T`
        lower_bound_1d (LowerBound, optional): Minimax lower bound, scalar explosive systems only
        assumptions_violated (tuple[str, ...]): Human readable notes on failed requirements
        block_bounds (tuple[BlockBound, ...]): Per-block bounds of a composite system
        notation (NotationTable, optional): The quantities the bound was built from
    """

    regime: str
    rate_class: str
    error_upper_bound: Optional[float]
    min_T: float
    min_T_ok: bool
    lower_bound_1d: Optional[LowerBound] = None
    assumptions_violated: tuple[str, ...] = field(default_factory=tuple)
    block_bounds: tuple[BlockBound, ...] = field(default_factory=tuple)
    notation: Optional[NotationTable] = None
