from dataclasses import dataclass
from typing import Optional

from sysid.errors import PreconditionError

__all__ = ["BoundConstants", "check_delta"]


@dataclass(frozen=True)
class BoundConstants:
    """
    Free constants of the bounds and the numerical knobs used to evaluate them

    Attributes:
        universal_C (float): The absolute constant C of the sample-size thresholds and error bounds
        universal_c (float): The absolute constant c of the sub-exponential tail factors
        R (float): Noise floor, σ_min of the noise covariance factor (1 for isotropic noise)
        boundary_C (float): Width of the marginal band around the unit circle, in units of 1/T
        overflow_log_cap (float): Largest natural log magnitude a simulation may reach
        psi_samples (int): Monte Carlo samples for ψ̂
        psi_seed (int): Seed of the ψ̂ estimate
        psi_tail (float): Remaining weight A^{-T} allowed in the simulated z_T
        outbox_grid (int, optional): Directions per sign pattern for φ, 64^min(d, 3) by default
        beta0_tol (float): Relative tolerance of the β₀ search
        beta0_scan_cap (int): Largest Gramian index scanned for β₀
    """

    universal_C: float = 1.0
    universal_c: float = 1.0
    R: float = 1.0
    boundary_C: float = 1.0
    overflow_log_cap: float = 650.0
    psi_samples: int = 2000
    psi_seed: int = 0
    psi_tail: float = 1e-12
    outbox_grid: Optional[int] = None
    beta0_tol: float = 1e-6
    beta0_scan_cap: int = 100_000

    def __post_init__(self) -> None:
        positive = {
            "universal_C": self.universal_C,
            "universal_c": self.universal_c,
            "R": self.R,
            "boundary_C": self.boundary_C,
            "overflow_log_cap": self.overflow_log_cap,
            "psi_samples": self.psi_samples,
            "beta0_tol": self.beta0_tol,
            "beta0_scan_cap": self.beta0_scan_cap,
        }
        problems = [f"{name} must be positive, got {value}" for name, value in positive.items() if value <= 0]
        if not 0 < self.psi_tail < 1:
            problems.append(f"psi_tail must lie in (0, 1), got {self.psi_tail}")
        if self.outbox_grid is not None and self.outbox_grid < 1:
            problems.append(f"outbox_grid must be positive, got {self.outbox_grid}")
        if problems:
            raise PreconditionError("; ".join(problems))


def check_delta(delta: float) -> float:
    if not 0 < delta < 1:
        raise PreconditionError(f"delta must lie in (0, 1), got {delta}")
    return float(delta)
