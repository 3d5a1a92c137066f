import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from sysid.estimation.ols import ols_estimate
from sysid.experiments.fitting import histogram_modes
from sysid.experiments.trials import ExperimentConfig, run_cells
from sysid.models.experiment import ExperimentResult, PlotSeries, TrialRecord
from sysid.models.system import NoiseModel, SystemSpec
from sysid.simulation.noise import make_sampler
from sysid.simulation.rng import cell_stream
from sysid.simulation.simulate import simulate
from sysid.utils.types import FloatArray

__all__ = ["InconsistencyReport", "inconsistency_experiment", "run_inconsistency"]

logger = logging.getLogger(__name__)

ACCURACY_THRESHOLD = 0.05


@dataclass(frozen=True, eq=False)
class InconsistencyReport:
    """
    Off-diagonal estimates of a regular and an irregular explosive system driven by the same noise

    Attributes:
        T (int): Horizon
        a (float): Common eigenvalue
        beta_regular (FloatArray): β̂_r, the (1, 2) entry of Â for [[a, 1], [0, a]], true value 1
        beta_irregular (FloatArray): β̂_o, the (1, 2) entry of Â for a I₂, true value 0
        errors_regular (FloatArray): ‖Â_r - A_r‖ per trial
        errors_irregular (FloatArray): ‖Â_o - A_o‖ per trial
        lambda_min_irregular (FloatArray): λ_min(Y_T) of the irregular system per trial
        modes (list[float]): Histogram mode locations of β̂_o
        threshold (float): Accuracy threshold for the regular system
    """

    T: int
    a: float
    beta_regular: FloatArray
    beta_irregular: FloatArray
    errors_regular: FloatArray
    errors_irregular: FloatArray
    lambda_min_irregular: FloatArray
    modes: list[float]
    threshold: float = ACCURACY_THRESHOLD

    @property
    def std_irregular(self) -> float:
        return float(np.std(self.beta_irregular, ddof=1))

    @property
    def std_regular(self) -> float:
        return float(np.std(self.beta_regular, ddof=1))

    @property
    def regular_accuracy(self) -> float:
        """Fraction of trials with ‖Â_r - A_r‖ below the threshold"""
        return float(np.mean(self.errors_regular < self.threshold))

    def summary(self) -> dict[str, Any]:
        return {
            "T": self.T,
            "a": self.a,
            "trials": int(self.beta_irregular.size),
            "beta_irregular": {"std": self.std_irregular, "modes": self.modes, "samples": self.beta_irregular},
            "beta_regular": {"std": self.std_regular, "samples": self.beta_regular},
            "modes": self.modes,
            "regular_accuracy": {"threshold": self.threshold, "fraction": self.regular_accuracy},
            "median_error": {
                "regular": float(np.median(self.errors_regular)),
                "irregular": float(np.median(self.errors_irregular)),
            },
        }

    def to_result(self) -> ExperimentResult:
        counts, edges = np.histogram(self.beta_irregular, bins="fd")
        centers = 0.5 * (edges[:-1] + edges[1:])
        records = tuple(
            TrialRecord(self.T, trial, float(error), float(lambda_min), float("nan"))
            for trial, (error, lambda_min) in enumerate(zip(self.errors_irregular, self.lambda_min_irregular))
        )
        return ExperimentResult(
            kind="inconsistency",
            summary=self.summary(),
            records=records,
            series=(PlotSeries("beta_o", tuple(centers.tolist()), tuple(float(count) for count in counts)),),
            x_label="β̂_o",
            y_label="count",
            log_x=False,
            log_y=False,
        )


def _trial(
    regular: SystemSpec, irregular: SystemSpec, noise: NoiseModel, T: int, seed: int, trial: int
) -> tuple[float, float, float, float, float]:
    noises = make_sampler(noise, T, 2).sample(cell_stream(seed, T, trial))
    fits = []
    for system in (regular, irregular):
        trajectory = simulate(system, noise, T, seed, noises=noises)
        fits.append(ols_estimate(trajectory, true_A=system.A))
    regular_fit, irregular_fit = fits
    return (
        float(regular_fit.A_hat[0, 1]),
        float(irregular_fit.A_hat[0, 1]),
        float(regular_fit.error_opnorm or 0.0),
        float(irregular_fit.error_opnorm or 0.0),
        irregular_fit.lambda_min_YT,
    )


def inconsistency_experiment(
    T: int = 1000,
    trials: int = 2000,
    seed: int = 0,
    a: float = 1.1,
    noise: NoiseModel = NoiseModel(),
    threads: int = 1,
    progress: bool = False,
    threshold: float = ACCURACY_THRESHOLD,
) -> InconsistencyReport:
    """
    Fit A_r = [[a, 1], [0, a]] and A_o = a I₂ on the same noise in every trial

    A_r is regular and its estimate converges, A_o is irregular: its states line up with one random direction, Y_T is
    numerically rank one and β̂_o keeps a spread distribution that does not shrink with T.
    """
    regular = SystemSpec.from_matrix([[a, 1.0], [0.0, a]])
    irregular = SystemSpec.from_matrix(a * np.eye(2))
    logger.info("inconsistency experiment at T=%d, a=%g, %d trials, seed %d", T, a, trials, seed)
    outcomes = run_cells(
        [(T, trial) for trial in range(trials)],
        lambda T_cell, trial: _trial(regular, irregular, noise, T_cell, seed, trial),
        threads,
        progress,
        "inconsistency",
    )
    columns = np.array(outcomes, dtype=np.float64).reshape(-1, 5)
    beta_irregular = columns[:, 1]
    modes = histogram_modes(beta_irregular) if trials > 1 else []
    report = InconsistencyReport(
        T=T,
        a=a,
        beta_regular=columns[:, 0],
        beta_irregular=beta_irregular,
        errors_regular=columns[:, 2],
        errors_irregular=columns[:, 3],
        lambda_min_irregular=columns[:, 4],
        modes=modes,
        threshold=threshold,
    )
    logger.info(
        "std(β̂_o) = %.4f, modes %s, regular accuracy %.3f",
        report.std_irregular if trials > 1 else float("nan"),
        [round(mode, 3) for mode in modes],
        report.regular_accuracy,
    )
    return report


def run_inconsistency(config: ExperimentConfig) -> InconsistencyReport:
    """`inconsistency_experiment` with T, a and the threshold read from the config options"""
    return inconsistency_experiment(
        T=int(config.option("T", 1000)),
        trials=config.trials,
        seed=config.seed,
        a=float(config.option("a", 1.1)),
        noise=config.noise,
        threads=config.threads,
        progress=config.progress,
        threshold=float(config.option("threshold", ACCURACY_THRESHOLD)),
    )
