from dataclasses import dataclass, field
from typing import Any

__all__ = ["CellSummary", "ExperimentResult", "McSummary", "PlotSeries", "RateFit", "TrialRecord", "RAW_HEADER"]

RAW_HEADER = ("T", "trial", "error", "lambda_min_YT", "selfnorm")


@dataclass(frozen=True)
class TrialRecord:
    """One (T, trial) cell of a Monte Carlo run, one row of `raw.csv`"""

    T: int
    trial: int
    error: float
    lambda_min_YT: float
    selfnorm: float

    def as_row(self) -> tuple[float, ...]:
        return (float(self.T), float(self.trial), self.error, self.lambda_min_YT, self.selfnorm)


@dataclass(frozen=True)
class CellSummary:
    """
    Error quantiles over the trials at one horizon

    Attributes:
        T (int): Horizon
        median_error (float): Median of ‖A - Â‖
        q10 (float): 10% quantile
        q90 (float): 90% quantile
        mean (float): Mean error
        violation_freq (dict[str, float]): Fraction of trials violating each named inequality
        violation_stderr (dict[str, float]): Binomial standard error of each frequency
    """

    T: int
    median_error: float
    q10: float
    q90: float
    mean: float
    violation_freq: dict[str, float] = field(default_factory=dict)
    violation_stderr: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class McSummary:
    per_T: tuple[CellSummary, ...]

    @property
    def T_values(self) -> list[int]:
        return [cell.T for cell in self.per_T]

    @property
    def medians(self) -> list[float]:
        return [cell.median_error for cell in self.per_T]


@dataclass(frozen=True)
class RateFit:
    """
    Least squares line through transformed points

    Attributes:
        slope (float): Fitted slope
        intercept (float): Fitted intercept
        r_squared (float): Coefficient of determination, in [0, 1]
        kind (str): "loglog" (log y against log x), "semilog" (log y against x) or "linear" (y against x)
    """

    slope: float
    intercept: float
    r_squared: float
    kind: str = "loglog"


@dataclass(frozen=True)
class PlotSeries:
    """One labelled (x, y) series for the emitted plot"""

    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]


@dataclass(frozen=True)
class ExperimentResult:
    """
    Everything an experiment hands to the artifact writer

    Attributes:
        kind (str): Experiment name
        summary (dict[str, Any]): Experiment specific results, may hold arrays and dataclasses, converted with
            `to_jsonable` when written into `summary.json`
        records (tuple[TrialRecord, ...]): Rows of `raw.csv`
        series (tuple[PlotSeries, ...]): Data for `plot.gp` and `plot.svg`
        x_label (str): Plot x axis label
        y_label (str): Plot y axis label
        log_x (bool): Logarithmic x axis
        log_y (bool): Logarithmic y axis
    """

    kind: str
    summary: dict[str, Any]
    records: tuple[TrialRecord, ...] = field(default_factory=tuple)
    series: tuple[PlotSeries, ...] = field(default_factory=tuple)
    x_label: str = "T"
    y_label: str = "error"
    log_x: bool = True
    log_y: bool = True
