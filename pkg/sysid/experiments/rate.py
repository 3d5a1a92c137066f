import logging
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from sysid.errors import PreconditionError
from sysid.estimation.diagnostics import selfnorm_statistic, symmetric_inverse_sqrt
from sysid.estimation.ols import covariance_and_martingale, ols_estimate, scaled_sums
from sysid.experiments.concentration import selfnorm_radius, selfnorm_radius_from_logdet
from sysid.experiments.fitting import fit_loglog_slope, fit_semilog_slope
from sysid.experiments.trials import ExperimentConfig, grid_cells, run_cells, summarize_cell
from sysid.linalg.spectral import eigenvalues, spectral_report
from sysid.models.experiment import ExperimentResult, McSummary, PlotSeries, RateFit, TrialRecord
from sysid.models.system import SystemSpec
from sysid.models.trajectory import Trajectory
from sysid.simulation.rng import cell_stream
from sysid.simulation.simulate import simulate, simulate_scaled
from sysid.utils.types import FloatArray, RegimeClass

__all__ = ["RateSweep", "run_rate_sweep"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RateSweep:
    """
    Outcome of a rate sweep

    Attributes:
        summary (McSummary): Error quantiles per horizon
        fit (RateFit, optional): Fit of the median errors, None when every median is zero
        records (tuple[TrialRecord, ...]): One record per (T, trial)
        metadata (dict[str, Any]): Pipeline per horizon, dropped horizons, empirical noise variance
    """

    summary: McSummary
    fit: Optional[RateFit]
    records: tuple[TrialRecord, ...]
    metadata: dict[str, Any] = field(default_factory=dict)

    def to_result(self) -> ExperimentResult:
        T_values = tuple(float(T) for T in self.summary.T_values)
        semilog = self.fit is not None and self.fit.kind == "semilog"
        series = (
            PlotSeries("median", T_values, tuple(self.summary.medians)),
            PlotSeries("q10", T_values, tuple(cell.q10 for cell in self.summary.per_T)),
            PlotSeries("q90", T_values, tuple(cell.q90 for cell in self.summary.per_T)),
        )
        return ExperimentResult(
            kind="rate",
            summary={"summary": self.summary, "fit": self.fit, "metadata": self.metadata},
            records=self.records,
            series=series,
            y_label="‖A - Â‖",
            log_x=not semilog,
        )


@dataclass(frozen=True)
class _TrialOutcome:
    record: TrialRecord
    selfnorm_violated: bool
    noise_variance: float


def _selfnorm(trajectory: Trajectory, A: FloatArray, delta: float, R: float) -> tuple[float, float]:
    """‖(Y_T + I)^{-1/2} S_T‖ with its radius at level δ"""
    if not trajectory.scaled:
        YT, ST = covariance_and_martingale(trajectory)
        V = np.eye(YT.shape[0])
        return selfnorm_statistic(YT, ST, V), selfnorm_radius(YT, V, delta, R)
    covariance, martingale, inverse_power = scaled_sums(trajectory, A)
    # Y_T + I = A^T (Ũ + A^{-T} A^{-T}') A^T'
    whitened = covariance + inverse_power @ inverse_power.T
    _, log_det_whitened = np.linalg.slogdet(whitened)
    _, log_det_power = np.linalg.slogdet(inverse_power)
    value = float(np.linalg.norm(symmetric_inverse_sqrt(whitened) @ martingale, 2))
    radius = selfnorm_radius_from_logdet(float(log_det_whitened - 2 * log_det_power), trajectory.dim, delta, R)
    return value, radius


def _trial(system: SystemSpec, config: ExperimentConfig, T: int, trial: int, scaled: bool) -> _TrialOutcome:
    rng = cell_stream(config.seed, T, trial)
    if scaled:
        trajectory = simulate_scaled(system, config.noise, T, config.seed, rng=rng)
    else:
        trajectory = simulate(
            system, config.noise, T, config.seed, rng=rng, overflow_log_cap=config.constants.overflow_log_cap
        )
    report = ols_estimate(trajectory, true_A=system.A, true_B=system.B)
    selfnorm, radius = _selfnorm(trajectory, system.A, config.delta, config.constants.R)
    noises = trajectory.require_noises()
    return _TrialOutcome(
        record=TrialRecord(
            T=T,
            trial=trial,
            error=float(report.error_opnorm or 0.0),
            lambda_min_YT=report.lambda_min_YT,
            selfnorm=selfnorm,
        ),
        selfnorm_violated=selfnorm > radius,
        noise_variance=float(np.mean(noises**2)),
    )


def _usable_grid(system: SystemSpec, config: ExperimentConfig) -> tuple[list[int], dict[int, bool], dict[str, Any]]:
    """Horizons kept, the scaled flag of each, and what was decided"""
    cap = config.constants.overflow_log_cap
    rho_max = float(np.abs(eigenvalues(system.A)).max())
    if rho_max <= 1.0:
        return list(config.T_grid), {T: False for T in config.T_grid}, {}

    log_rho = math.log(rho_max)
    T_cap = math.floor(cap / log_rho)
    grid = [T for T in config.T_grid if T <= T_cap]
    dropped = [T for T in config.T_grid if T > T_cap]
    if dropped:
        logger.warning("dropping horizons %s above the explosive cap T <= %d", dropped, T_cap)
    if not grid:
        raise PreconditionError(f"Every horizon exceeds the explosive cap T <= {T_cap}")
    # Y_T grows like ρ^{2T}
    scaled = {T: 2 * T * log_rho > cap for T in grid}
    if any(scaled.values()) and system.has_inputs:
        raise PreconditionError("Horizons past the overflow cap need the scaled pipeline, which has no inputs")
    return grid, scaled, {"T_cap": T_cap, "dropped_T": dropped}


def _fit(summary: McSummary, explosive: bool) -> Optional[RateFit]:
    points = [(float(cell.T), cell.median_error) for cell in summary.per_T if cell.median_error > 0]
    if len({x for x, _ in points}) < 2:
        return None
    return fit_semilog_slope(points) if explosive else fit_loglog_slope(points)


def run_rate_sweep(config: ExperimentConfig) -> RateSweep:
    """
    Simulate and fit `trials` trajectories at every horizon of the grid, then fit the median errors

    Stable and marginal systems are fitted log-log, purely explosive ones semi-log (natural-log error against T), so
    the slope reads as the exponent of T or as the per-step decay rate. Explosive grids are capped at
    T <= cap / log ρ_max and switch to the scaled pipeline once Y_T would overflow.

    With inputs the error is the joint ‖[A B] - [Â B̂]‖.

    Examples:
        >>> from sysid.models.system import NoiseModel
        >>> config = ExperimentConfig(
        ...     system=SystemSpec.from_matrix([[1.0]], x0=[1.0]), noise=NoiseModel.zero(), T_grid=(10, 20), trials=2
        ... )
        >>> max(run_rate_sweep(config).summary.medians) < 1e-12
        True
    """
    system = config.require_system()
    grid, scaled, metadata = _usable_grid(system, config)
    report = spectral_report(system.A, grid[-1], config.constants.boundary_C)
    explosive = report.overall == frozenset({RegimeClass.EXPLOSIVE})
    logger.info(
        "rate sweep over T=%s, %d trials, seed %d, regime %s", grid, config.trials, config.seed, sorted(report.overall)
    )

    outcomes = run_cells(
        grid_cells(grid, config.trials),
        lambda T, trial: _trial(system, config, T, trial, scaled[T]),
        config.threads,
        config.progress,
        "rate sweep",
    )

    cells = []
    for index, T in enumerate(grid):
        chunk = outcomes[index * config.trials : (index + 1) * config.trials]
        errors = np.array([outcome.record.error for outcome in chunk])
        violations = {"selfnorm": np.array([outcome.selfnorm_violated for outcome in chunk])}
        cells.append(summarize_cell(T, errors, violations))
    summary = McSummary(per_T=tuple(cells))
    fit = _fit(summary, explosive)
    if fit is None:
        logger.info("median errors vanish, no rate fit")
    else:
        logger.info("%s slope %.4f (r² = %.4f)", fit.kind, fit.slope, fit.r_squared)

    metadata = {
        **metadata,
        "pipeline": {str(T): "scaled" if scaled[T] else "direct" for T in grid},
        "regime": sorted(regime.value for regime in report.overall),
        "noise_family": config.noise.family.value,
        "noise_variance": float(np.mean([outcome.noise_variance for outcome in outcomes])),
        "joint_error": system.has_inputs,
    }
    if any(scaled.values()):
        metadata["lambda_min_YT"] = "scaled horizons record λ_min(A^{-T} Y_T A^{-T}')"
    return RateSweep(summary=summary, fit=fit, records=tuple(outcome.record for outcome in outcomes), metadata=metadata)
