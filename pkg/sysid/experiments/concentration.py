import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy import linalg

from sysid.bounds.notation import lower_bound_requirements
from sysid.errors import PreconditionError
from sysid.estimation.diagnostics import selfnorm_statistic
from sysid.experiments.trials import ExperimentConfig, binomial_stderr, run_cells
from sysid.linalg.gramian import gramian
from sysid.linalg.spectral import eigenvalues
from sysid.models.experiment import ExperimentResult, PlotSeries, TrialRecord
from sysid.models.system import NoiseFamily, SystemSpec
from sysid.simulation.rng import cell_stream
from sysid.simulation.simulate import simulate
from sysid.utils.types import FloatArray

__all__ = [
    "ConcentrationReport",
    "InequalityCoverage",
    "concentration_suite",
    "energy_markov_radius",
    "selfnorm_radius",
    "selfnorm_radius_from_logdet",
    "selfnorm_violation",
]

logger = logging.getLogger(__name__)

SANDWICH_LOW, SANDWICH_HIGH = 0.75, 1.25
DEFAULT_HORIZONS = {"selfnorm": 512, "sandwich": 2048, "markov": 512, "lower_bound": 4096}


def selfnorm_radius(YT: FloatArray, V: FloatArray, delta: float, R: float = 1.0) -> float:
    """
    R sqrt(8d (log 5 + log det(Y_T + V) / 2d - log det V / 2d - log δ / d)), the level ‖(Y_T + V)^{-1/2} S_T‖ exceeds
    with probability at most δ

    Examples:
        >>> round(selfnorm_radius(np.zeros((1, 1)), np.eye(1), 0.05), 4)
        6.0697
    """
    sign, logdet_total = np.linalg.slogdet(YT + V)
    sign_V, logdet_V = np.linalg.slogdet(V)
    if sign <= 0 or sign_V <= 0:
        raise PreconditionError("Y_T + V and V must be positive definite")
    return selfnorm_radius_from_logdet(float(logdet_total - logdet_V), YT.shape[0], delta, R)


def selfnorm_radius_from_logdet(log_det_ratio: float, d: int, delta: float, R: float = 1.0) -> float:
    """`selfnorm_radius` from log det(Y_T + V) - log det V, for covariances that only exist in scaled form"""
    return R * math.sqrt(8 * d * (math.log(5.0) + log_det_ratio / (2 * d) - math.log(delta) / d))


def energy_markov_radius(A: FloatArray, T: int, delta: float) -> float:
    """T tr Γ_{T-1}(A) / δ, Markov's bound on ‖Σ_{t=1}^T X_t X_t'‖ for unit covariance noise and X_0 = 0"""
    return T * float(np.trace(gramian(A, T - 1))) / delta


@dataclass(frozen=True)
class InequalityCoverage:
    """
    Violation frequency of one inequality at one δ

    Attributes:
        name (str): "selfnorm", "sandwich", "markov" or "lower_bound"
        delta (float): Nominal failure probability
        T (int): Horizon
        violation_freq (float): Fraction of trials in which the inequality failed
        violation_stderr (float): Binomial standard error
        within_nominal (bool): violation_freq <= δ
        regime_ok (bool): The system meets the requirements of the inequality
        notes (tuple[str, ...]): Requirements that failed
    """

    name: str
    delta: float
    T: int
    violation_freq: float
    violation_stderr: float
    within_nominal: bool
    regime_ok: bool = True
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class ConcentrationReport:
    coverages: tuple[InequalityCoverage, ...]
    records: tuple[TrialRecord, ...] = ()
    requirements: dict[str, Any] = field(default_factory=dict)

    def coverage(self, name: str, delta: float) -> InequalityCoverage:
        for item in self.coverages:
            if item.name == name and math.isclose(item.delta, delta):
                return item
        raise KeyError(f"No coverage for {name} at δ={delta}")

    def to_result(self) -> ExperimentResult:
        series = []
        for name in sorted({item.name for item in self.coverages}):
            items = sorted((item for item in self.coverages if item.name == name), key=lambda item: item.delta)
            series.append(
                PlotSeries(name, tuple(item.delta for item in items), tuple(item.violation_freq for item in items))
            )
        deltas = sorted({item.delta for item in self.coverages})
        series.append(PlotSeries("nominal", tuple(deltas), tuple(deltas)))
        return ExperimentResult(
            kind="concentration",
            summary={"coverages": [_coverage_json(item) for item in self.coverages], "requirements": self.requirements},
            records=self.records,
            series=tuple(series),
            x_label="delta",
            y_label="violation frequency",
            log_x=False,
            log_y=False,
        )


def _coverage_json(item: InequalityCoverage) -> dict[str, Any]:
    return {
        "name": item.name,
        "delta": item.delta,
        "T": item.T,
        "violation_freq": item.violation_freq,
        "violation_stderr": item.violation_stderr,
        "within_nominal": item.within_nominal,
        "regime_ok": item.regime_ok,
        "notes": list(item.notes),
    }


@dataclass(frozen=True)
class _TrialStatistics:
    selfnorm: float
    YT_selfnorm: FloatArray
    sandwich: tuple[float, float]
    energy: float
    lambda_min_YT: float


def _statistics(system: SystemSpec, config: ExperimentConfig, horizons: dict[str, int], trial: int) -> _TrialStatistics:
    """Every statistic of one trial, read off prefixes of a single trajectory"""
    T_total = max(horizons.values())
    trajectory = simulate(
        system,
        config.noise,
        T_total,
        config.seed,
        rng=cell_stream(config.seed, T_total, trial),
        overflow_log_cap=config.constants.overflow_log_cap,
    )
    states, noises = trajectory.states, trajectory.require_noises()
    d = system.dim

    T = horizons["selfnorm"]
    current = states[:T]
    YT, ST = current.T @ current, current.T @ noises[:T]
    selfnorm = selfnorm_statistic(YT, ST, np.eye(d))

    T = horizons["sandwich"]
    window = noises[:T]
    sandwich = linalg.eigvalsh(window.T @ window / T)

    T = horizons["markov"]
    visited = states[1 : T + 1]
    energy = float(np.linalg.norm(visited.T @ visited, 2))

    T = horizons["lower_bound"]
    current = states[:T]
    lambda_min = float(linalg.eigvalsh(current.T @ current)[0])
    return _TrialStatistics(
        selfnorm=selfnorm,
        YT_selfnorm=YT,
        sandwich=(float(sandwich[0]), float(sandwich[-1])),
        energy=energy,
        lambda_min_YT=lambda_min,
    )


def concentration_suite(config: ExperimentConfig) -> ConcentrationReport:
    """
    Empirical violation frequencies of four concentration inequalities

    - selfnorm: ‖(Y_T + I)^{-1/2} S_T‖ <= `selfnorm_radius` at level δ
    - sandwich: every eigenvalue of (1/T) Σ η_t η_t' lies in [3/4, 5/4]
    - markov: ‖Σ_{t=1}^T X_t X_t'‖ <= T tr Γ_{T-1} / δ
    - lower_bound: λ_min(Y_T) >= T R² / 8, with the sample-size and spectral requirements reported

    One trajectory per trial feeds all four, each inequality reading its own prefix. Regime mismatches are noted per
    inequality and never abort the suite.

    Options:
        deltas (list[float]): Levels to evaluate, [0.05, 0.1] by default
        horizons (dict[str, int]): Horizon of each inequality, defaults 512, 2048, 512 and 4096
    """
    system = config.require_system()
    if system.has_inputs:
        raise PreconditionError("The concentration suite runs on systems without inputs")
    deltas = tuple(float(delta) for delta in config.option("deltas", (0.05, 0.1)))
    horizons = {**DEFAULT_HORIZONS, **config.option("horizons", {})}
    A, R, d = system.A, config.constants.R, system.dim

    statistics = run_cells(
        [(max(horizons.values()), trial) for trial in range(config.trials)],
        lambda _T, trial: _statistics(system, config, horizons, trial),
        config.threads,
        config.progress,
        "concentration",
    )
    n = len(statistics)
    rho_max = float(np.abs(eigenvalues(A)).max())
    coverages: list[InequalityCoverage] = []
    requirements: dict[str, Any] = {}
    for delta in deltas:
        radii = [selfnorm_radius(item.YT_selfnorm, np.eye(d), delta, R) for item in statistics]
        flags = np.array([item.selfnorm > radius for item, radius in zip(statistics, radii)])
        coverages.append(_coverage("selfnorm", delta, horizons["selfnorm"], flags, n))

        flags = np.array([low < SANDWICH_LOW or high > SANDWICH_HIGH for low, high in (s.sandwich for s in statistics)])
        notes = () if config.noise.family is NoiseFamily.GAUSSIAN else ("the sandwich assumes isotropic noise",)
        coverages.append(_coverage("sandwich", delta, horizons["sandwich"], flags, n, notes=notes))

        notes = () if math.isclose(config.noise.scale, 1.0) else ("the Markov radius assumes unit noise covariance",)
        if system.initial_state.any():
            notes = (*notes, "the Markov radius assumes X_0 = 0")
        radius = energy_markov_radius(A, horizons["markov"], delta)
        flags = np.array([item.energy > radius for item in statistics])
        coverages.append(_coverage("markov", delta, horizons["markov"], flags, n, notes=notes))

        T = horizons["lower_bound"]
        checks = lower_bound_requirements(A, T, delta, config.constants)
        requirements[f"lower_bound@{delta:g}"] = checks
        notes = tuple(
            message
            for key, message in (
                ("T_ok", f"T={T} is below the sample-size floors"),
                ("rho_ok", f"ρ_max = {rho_max:.6g} exceeds 1 + c/T"),
            )
            if not checks[key]
        )
        flags = np.array([item.lambda_min_YT < T * R**2 / 8 for item in statistics])
        coverages.append(_coverage("lower_bound", delta, T, flags, n, regime_ok=not notes, notes=notes))

    for item in coverages:
        level = logging.INFO if item.within_nominal else logging.WARNING
        logger.log(level, "%s at δ=%g: violation frequency %.4f", item.name, item.delta, item.violation_freq)

    T_selfnorm = horizons["selfnorm"]
    records = tuple(
        TrialRecord(T_selfnorm, trial, math.nan, float(linalg.eigvalsh(item.YT_selfnorm)[0]), item.selfnorm)
        for trial, item in enumerate(statistics)
    )
    return ConcentrationReport(coverages=tuple(coverages), records=records, requirements=requirements)


def _coverage(
    name: str,
    delta: float,
    T: int,
    flags: FloatArray,
    n: int,
    regime_ok: bool = True,
    notes: tuple[str, ...] = (),
) -> InequalityCoverage:
    frequency = float(np.mean(flags)) if n else math.nan
    return InequalityCoverage(
        name=name,
        delta=delta,
        T=T,
        violation_freq=frequency,
        violation_stderr=binomial_stderr(frequency, n),
        within_nominal=frequency <= delta,
        regime_ok=regime_ok,
        notes=notes,
    )


def selfnorm_violation(YT: FloatArray, ST: FloatArray, delta: float, R: float = 1.0) -> bool:
    """Whether ‖(Y_T + I)^{-1/2} S_T‖ exceeds its radius at level δ"""
    V = np.eye(YT.shape[0])
    return selfnorm_statistic(YT, ST, V) > selfnorm_radius(YT, V, delta, R)
