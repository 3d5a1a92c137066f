import logging
import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
from scipy import linalg

from sysid.errors import PreconditionError
from sysid.estimation.ols import scaled_sums
from sysid.experiments.fitting import fit_linear_slope
from sysid.experiments.trials import ExperimentConfig, grid_cells, run_cells
from sysid.models.experiment import ExperimentResult, PlotSeries, RateFit, TrialRecord
from sysid.models.system import NoiseModel, SystemSpec
from sysid.simulation.rng import cell_stream
from sysid.simulation.simulate import simulate_scaled
from sysid.utils.types import FloatArray

__all__ = ["SpectrumGrowth", "covariance_log_spectrum", "run_spectrum_growth", "spectrum_growth_experiment"]

logger = logging.getLogger(__name__)

DEFAULT_GRID = (50, 100, 150, 200, 250, 300)


def covariance_log_spectrum(system: SystemSpec, noise: NoiseModel, T: int, seed: int, trial: int) -> FloatArray:
    """
    log of the eigenvalues of Y_T = Σ_{t<T} X_t X_t', ascending, for an invertible A

    Y_T is never formed: with Ũ = A^{-T} Y_T A^{-T}' from the scaled pipeline,
    log det Y_T = 2 log |det A^T| + log det Ũ and, for A = a I, log λ_i(Y_T) = 2 T log a + log λ_i(Ũ).
    """
    trajectory = simulate_scaled(system, noise, T, seed, rng=cell_stream(seed, T, trial))
    covariance, _, _ = scaled_sums(trajectory, system.A)
    values = linalg.eigvalsh(covariance)
    if values[0] <= 0:
        raise PreconditionError(f"Scaled covariance lost definiteness at T={T}, λ_min = {values[0]:.3g}")
    scale = 2 * T * math.log(abs(float(system.A[0, 0])))
    return np.asarray(scale + np.log(values), dtype=np.float64)


@dataclass(frozen=True, eq=False)
class SpectrumGrowth:
    """
    Growth of the covariance spectrum of a I₂

    Attributes:
        a (float): Eigenvalue, above one
        T_grid (tuple[int, ...]): Horizons
        log_sigma_max (FloatArray): Median log σ₁(Y_T) per horizon
        log_sigma_min (FloatArray): Median log σ₂(Y_T) per horizon
        fit_max (RateFit): Line through (T, log σ₁)
        fit_min (RateFit): Line through (T, log σ₂)
        fit_condition (RateFit): Line through (T, log cond Y_T)
    """

    a: float
    T_grid: tuple[int, ...]
    log_sigma_max: FloatArray
    log_sigma_min: FloatArray
    fit_max: RateFit
    fit_min: RateFit
    fit_condition: RateFit
    records: tuple[TrialRecord, ...] = ()

    @property
    def slope_gap(self) -> float:
        """Difference of the two slopes, the exponent of the condition number growth"""
        return self.fit_max.slope - self.fit_min.slope

    def summary(self) -> dict[str, Any]:
        log_a = math.log(self.a)
        return {
            "a": self.a,
            "T_grid": list(self.T_grid),
            "log_sigma_max": self.log_sigma_max,
            "log_sigma_min": self.log_sigma_min,
            "fits": {"sigma_max": self.fit_max, "sigma_min": self.fit_min, "condition": self.fit_condition},
            "slope_gap": self.slope_gap,
            "expected": {"sigma_max": 2 * log_a, "sigma_min_envelope": log_a, "condition": log_a},
        }

    def to_result(self) -> ExperimentResult:
        T_values = tuple(float(T) for T in self.T_grid)
        return ExperimentResult(
            kind="spectrum",
            summary=self.summary(),
            records=self.records,
            series=(
                PlotSeries("log sigma_max", T_values, tuple(self.log_sigma_max.tolist())),
                PlotSeries("log sigma_min", T_values, tuple(self.log_sigma_min.tolist())),
            ),
            y_label="log σ(Y_T)",
            log_x=False,
            log_y=False,
        )


def spectrum_growth_experiment(
    a: float = 1.1,
    T_grid: Sequence[int] = DEFAULT_GRID,
    trials: int = 100,
    seed: int = 0,
    noise: NoiseModel = NoiseModel(),
    threads: int = 1,
    progress: bool = False,
) -> SpectrumGrowth:
    """
    Fit the median log singular values of Y_T for a I₂ against T

    σ₁ grows like a^{2T} while σ₂ only grows like √T a^T, so the condition number grows like a^T.
    """
    if a <= 1:
        raise PreconditionError(f"The growth experiment needs a > 1, got {a}")
    T_grid = tuple(int(T) for T in T_grid)
    system = SystemSpec.from_matrix(a * np.eye(2))
    logger.info("spectrum growth for a=%g over T=%s, %d trials", a, list(T_grid), trials)
    spectra = run_cells(
        grid_cells(T_grid, trials),
        lambda T, trial: covariance_log_spectrum(system, noise, T, seed, trial),
        threads,
        progress,
        "spectrum",
    )
    logs = np.array(spectra).reshape(len(T_grid), trials, 2)
    log_sigma_min = np.median(logs[:, :, 0], axis=1)
    log_sigma_max = np.median(logs[:, :, 1], axis=1)
    log_condition = np.median(logs[:, :, 1] - logs[:, :, 0], axis=1)
    T_values = [float(T) for T in T_grid]

    with np.errstate(over="ignore"):
        lambda_min = np.exp(logs[:, :, 0])
    records = tuple(
        TrialRecord(T, trial, float("nan"), float(lambda_min[index, trial]), float("nan"))
        for index, T in enumerate(T_grid)
        for trial in range(trials)
    )
    report = SpectrumGrowth(
        a=a,
        T_grid=T_grid,
        log_sigma_max=log_sigma_max,
        log_sigma_min=log_sigma_min,
        fit_max=fit_linear_slope(zip(T_values, log_sigma_max)),
        fit_min=fit_linear_slope(zip(T_values, log_sigma_min)),
        fit_condition=fit_linear_slope(zip(T_values, log_condition)),
        records=records,
    )
    logger.info(
        "log σ₁ slope %.4f, log σ₂ slope %.4f (2 log a = %.4f)",
        report.fit_max.slope,
        report.fit_min.slope,
        2 * math.log(a),
    )
    return report


def run_spectrum_growth(config: ExperimentConfig) -> SpectrumGrowth:
    """`spectrum_growth_experiment` with a from the options and the grid from the config"""
    return spectrum_growth_experiment(
        a=float(config.option("a", 1.1)),
        T_grid=config.T_grid,
        trials=config.trials,
        seed=config.seed,
        noise=config.noise,
        threads=config.threads,
        progress=config.progress,
    )
