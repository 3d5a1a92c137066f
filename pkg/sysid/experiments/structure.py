import logging
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np
from scipy import linalg

from sysid.errors import PreconditionError
from sysid.estimation.diagnostics import explosive_pair
from sysid.experiments.fitting import fit_semilog_slope
from sysid.experiments.trials import ExperimentConfig, grid_cells, run_cells
from sysid.linalg.gramian import gramian
from sysid.linalg.jordan import JordanSpec
from sysid.models.experiment import ExperimentResult, PlotSeries, RateFit, TrialRecord
from sysid.models.system import NoiseModel, SystemSpec
from sysid.simulation.rng import cell_stream
from sysid.simulation.simulate import simulate_scaled

__all__ = [
    "FloorCheck",
    "GapCheck",
    "GramianCheck",
    "StructureReport",
    "describe_jordan",
    "gap_decay_check",
    "gramian_growth_check",
    "run_structure_checks",
    "structure_checks",
    "surrogate_floor_check",
]

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-9
COLLAPSE_LEVEL = 1e-8
GAP_SLOPE_FACTOR = 0.9
SPREAD_LIMIT = 2.0
DEFAULT_T_GRID = (60, 90, 120, 150, 180)
DEFAULT_t_GRID = tuple(2**k for k in range(4, 11))
IRREGULAR_CONTROL = JordanSpec.diagonal([1.5, 1.5])


def describe_jordan(spec: JordanSpec) -> str:
    """
    Short label of a Jordan structure

    Examples:
        >>> describe_jordan(JordanSpec.from_pairs([(1.5, 2), (0.5, 1)]))
        'J2(1.5)+J1(0.5)'
    """

    def value(eigenvalue: complex) -> str:
        return f"{eigenvalue.real:g}" if eigenvalue.imag == 0 else f"{eigenvalue:g}"

    return "+".join(f"J{block.size}({value(block.eigenvalue)})" for block in spec.blocks)


@dataclass(frozen=True)
class GramianCheck:
    """
    σ_min(Γ_t)/t over a grid of t for a system with unit modulus eigenvalues

    Attributes:
        label (str): Jordan structure
        t_grid (tuple[int, ...]): Gramian horizons
        ratios (tuple[float, ...]): σ_min(Γ_t)/t
        exact (bool, optional): For diagonal unit modulus systems, whether σ_min(Γ_t) = t + 1 held at every t
    """

    label: str
    t_grid: tuple[int, ...]
    ratios: tuple[float, ...]
    exact: Optional[bool] = None

    @property
    def min_ratio(self) -> float:
        return min(self.ratios)

    @property
    def spread(self) -> float:
        """max ratio / min ratio"""
        return max(self.ratios) / self.min_ratio if self.min_ratio > 0 else math.inf

    @property
    def ok(self) -> bool:
        return self.min_ratio > 0 and self.spread <= SPREAD_LIMIT and self.exact is not False


@dataclass(frozen=True)
class GapCheck:
    """
    Decay of the median ‖U_T - F_T‖ over T

    Attributes:
        label (str): Jordan structure
        T_grid (tuple[int, ...]): Horizons
        median_gaps (tuple[float, ...]): Median gap per horizon
        fit (RateFit, optional): Semi-log fit of the medians, None when a median vanished
        rho_min (float): Smallest eigenvalue modulus
    """

    label: str
    T_grid: tuple[int, ...]
    median_gaps: tuple[float, ...]
    fit: Optional[RateFit]
    rho_min: float

    @property
    def ok(self) -> bool:
        return self.fit is not None and self.fit.slope <= -GAP_SLOPE_FACTOR * math.log(self.rho_min)


@dataclass(frozen=True)
class FloorCheck:
    """
    Smallest eigenvalue of F_T across trials

    Attributes:
        label (str): Jordan structure
        regular (bool): Whether the structure is regular
        T (int): Horizon
        floors (tuple[float, ...]): λ_min(F_T) per trial
    """

    label: str
    regular: bool
    T: int
    floors: tuple[float, ...]

    @property
    def min_floor(self) -> float:
        return min(self.floors)

    @property
    def max_floor(self) -> float:
        return max(self.floors)

    @property
    def ok(self) -> bool:
        """Positive everywhere for regular structures, collapsed everywhere for irregular ones"""
        if self.regular:
            return self.min_floor > 0
        return self.max_floor <= COLLAPSE_LEVEL


@dataclass(frozen=True)
class StructureReport:
    gramian: tuple[GramianCheck, ...] = ()
    gaps: tuple[GapCheck, ...] = ()
    floors: tuple[FloorCheck, ...] = ()
    skipped: tuple[str, ...] = ()
    records: tuple[TrialRecord, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(check.ok for check in (*self.gramian, *self.gaps, *self.floors))

    def summary(self) -> dict[str, Any]:
        return {
            "gramian": [
                {**_fields(check), "min_ratio": check.min_ratio, "spread": check.spread, "ok": check.ok}
                for check in self.gramian
            ],
            "gaps": [{**_fields(check), "ok": check.ok} for check in self.gaps],
            "floors": [
                {**_fields(check), "min_floor": check.min_floor, "max_floor": check.max_floor, "ok": check.ok}
                for check in self.floors
            ],
            "skipped": list(self.skipped),
            "ok": self.ok,
        }

    def to_result(self) -> ExperimentResult:
        series = tuple(
            PlotSeries(f"gap {check.label}", tuple(float(T) for T in check.T_grid), check.median_gaps)
            for check in self.gaps
        )
        return ExperimentResult(
            kind="structure",
            summary=self.summary(),
            records=self.records,
            series=series,
            y_label="‖U_T - F_T‖",
            log_x=False,
        )


def _fields(check: Any) -> dict[str, Any]:
    return {name: getattr(check, name) for name in check.__dataclass_fields__}


def gramian_growth_check(spec: JordanSpec, t_grid: Sequence[int] = DEFAULT_t_GRID) -> GramianCheck:
    """
    σ_min(Γ_t(A))/t over `t_grid`, which stays bounded away from zero for unit modulus eigenvalues

    Examples:
        >>> check = gramian_growth_check(JordanSpec.from_pairs([(1.0, 2)]))
        >>> check.ok
        True
    """
    if np.any(np.abs(spec.moduli() - 1.0) > UNIT_TOL):
        raise PreconditionError(f"The Gramian growth check needs unit modulus eigenvalues, got {spec.moduli()}")
    A = SystemSpec.from_jordan(spec).A
    minima = [float(linalg.eigvalsh(gramian(A, t))[0]) for t in t_grid]
    exact = None
    if all(block.size == 1 for block in spec.blocks):
        exact = all(math.isclose(value, t + 1, rel_tol=1e-9) for value, t in zip(minima, t_grid))
    return GramianCheck(
        label=describe_jordan(spec),
        t_grid=tuple(t_grid),
        ratios=tuple(value / t for value, t in zip(minima, t_grid)),
        exact=exact,
    )


def _gap(system: SystemSpec, noise: NoiseModel, T: int, seed: int, trial: int) -> tuple[float, float]:
    trajectory = simulate_scaled(system, noise, T, seed, rng=cell_stream(seed, T, trial))
    diagnostics = explosive_pair(trajectory, system.A)
    return diagnostics.gap_opnorm, diagnostics.lambda_min_FT


def gap_decay_check(
    spec: JordanSpec,
    T_grid: Sequence[int] = DEFAULT_T_GRID,
    trials: int = 50,
    seed: int = 0,
    noise: NoiseModel = NoiseModel(),
    threads: int = 1,
    progress: bool = False,
) -> GapCheck:
    """
    Semi-log fit of the median ‖U_T - F_T‖ over T, the slope should not exceed -0.9 log ρ_min
    """
    rho_min = float(spec.moduli().min())
    if rho_min <= 1.0:
        raise PreconditionError(f"The gap check needs ρ_min > 1, got {rho_min}")
    system = SystemSpec.from_jordan(spec)
    T_grid = tuple(int(T) for T in T_grid)
    gaps = run_cells(
        grid_cells(T_grid, trials),
        lambda T, trial: _gap(system, noise, T, seed, trial)[0],
        threads,
        progress,
        f"gap {describe_jordan(spec)}",
    )
    medians = tuple(float(value) for value in np.median(np.reshape(gaps, (len(T_grid), trials)), axis=1))
    fit = None
    if all(value > 0 for value in medians):
        fit = fit_semilog_slope(zip([float(T) for T in T_grid], medians))
    return GapCheck(label=describe_jordan(spec), T_grid=T_grid, median_gaps=medians, fit=fit, rho_min=rho_min)


def surrogate_floor_check(
    spec: JordanSpec,
    T: int = 120,
    trials: int = 50,
    seed: int = 0,
    noise: NoiseModel = NoiseModel(),
    threads: int = 1,
    progress: bool = False,
) -> FloorCheck:
    """λ_min(F_T) per trial, positive for regular structures and collapsing for irregular ones"""
    system = SystemSpec.from_jordan(spec)
    floors = run_cells(
        [(T, trial) for trial in range(trials)],
        lambda T_cell, trial: _gap(system, noise, T_cell, seed, trial)[1],
        threads,
        progress,
        f"floor {describe_jordan(spec)}",
    )
    return FloorCheck(label=describe_jordan(spec), regular=spec.is_regular(), T=T, floors=tuple(floors))


def structure_checks(
    jordan_list: Sequence[JordanSpec],
    T_grid: Sequence[int] = DEFAULT_T_GRID,
    t_grid: Sequence[int] = DEFAULT_t_GRID,
    trials: int = 50,
    seed: int = 0,
    noise: NoiseModel = NoiseModel(),
    threads: int = 1,
    progress: bool = False,
    irregular_control: Optional[JordanSpec] = IRREGULAR_CONTROL,
) -> StructureReport:
    """
    Gramian growth for unit modulus structures, gap decay and F_T floors for explosive ones

    Structures that fit neither check are listed as skipped. The F_T floor is also evaluated for
    `irregular_control`, 1.5 I₂ by default, whose F_T is rank one.
    """
    gramian_checks, gap_checks, floor_checks, skipped = [], [], [], []
    T_floor = int(T_grid[len(T_grid) // 2])
    for spec in jordan_list:
        moduli = spec.moduli()
        if np.all(np.abs(moduli - 1.0) <= UNIT_TOL):
            gramian_checks.append(gramian_growth_check(spec, t_grid))
        elif moduli.min() > 1.0:
            if spec.is_regular():
                gap_checks.append(gap_decay_check(spec, T_grid, trials, seed, noise, threads, progress))
            floor_checks.append(surrogate_floor_check(spec, T_floor, trials, seed, noise, threads, progress))
        else:
            skipped.append(describe_jordan(spec))
    if irregular_control is not None:
        floor_checks.append(surrogate_floor_check(irregular_control, T_floor, trials, seed, noise, threads, progress))
    report = StructureReport(
        gramian=tuple(gramian_checks),
        gaps=tuple(gap_checks),
        floors=tuple(floor_checks),
        skipped=tuple(skipped),
        records=tuple(
            TrialRecord(check.T, trial, float("nan"), floor, float("nan"))
            for check in floor_checks
            for trial, floor in enumerate(check.floors)
        ),
    )
    for check in (*report.gramian, *report.gaps, *report.floors):
        level = logging.INFO if check.ok else logging.WARNING
        logger.log(level, "%s %s: ok=%s", type(check).__name__, check.label, check.ok)
    return report


def _eigenvalue(value: Any) -> complex:
    """A real number or a [re, im] pair"""
    if isinstance(value, (list, tuple)):
        real, imag = value
        return complex(real, imag)
    return complex(value)


def run_structure_checks(config: ExperimentConfig) -> StructureReport:
    """
    `structure_checks` over the "jordan" option, a list of [[eigenvalue, size], ...] structures

    Defaults to J₂(1), diag(1, 1), 1.5 and J₂(1.5).
    """
    structures = config.option("jordan", [[[1.0, 2]], [[1.0, 1], [1.0, 1]], [[1.5, 1]], [[1.5, 2]]])
    specs = [JordanSpec.from_pairs((_eigenvalue(value), int(size)) for value, size in pairs) for pairs in structures]
    return structure_checks(
        specs,
        T_grid=config.T_grid,
        t_grid=config.option("t_grid", DEFAULT_t_GRID),
        trials=config.trials,
        seed=config.seed,
        noise=config.noise,
        threads=config.threads,
        progress=config.progress,
    )
