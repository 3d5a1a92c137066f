from typing import Iterable

import numpy as np

from sysid.errors import PreconditionError
from sysid.models.experiment import RateFit
from sysid.utils.types import FloatArray

__all__ = ["fit_linear_slope", "fit_loglog_slope", "fit_semilog_slope", "histogram_modes"]


def _line_fit(x: FloatArray, y: FloatArray, kind: str) -> RateFit:
    if np.unique(x).size < 2:
        raise PreconditionError("A slope fit needs at least two distinct x values")
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sum((y - (slope * x + intercept)) ** 2))
    total = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if total == 0.0 else float(np.clip(1.0 - residual / total, 0.0, 1.0))
    return RateFit(slope=float(slope), intercept=float(intercept), r_squared=r_squared, kind=kind)


def _split(points: Iterable[tuple[float, float]]) -> tuple[FloatArray, FloatArray]:
    array = np.asarray(list(points), dtype=np.float64).reshape(-1, 2)
    return array[:, 0], array[:, 1]


def fit_loglog_slope(points: Iterable[tuple[float, float]]) -> RateFit:
    """
    Least squares line through (log x, log y)

    Examples:
        >>> fit = fit_loglog_slope([(1, 3.0), (2, 1.5), (4, 0.75)])
        >>> round(fit.slope, 6), round(fit.r_squared, 6)
        (-1.0, 1.0)
    """
    x, y = _split(points)
    if np.any(x <= 0) or np.any(y <= 0):
        raise PreconditionError("A log-log fit needs positive coordinates")
    return _line_fit(np.log(x), np.log(y), "loglog")


def fit_linear_slope(points: Iterable[tuple[float, float]]) -> RateFit:
    """Least squares line through the points as given, for quantities already on a log scale"""
    x, y = _split(points)
    return _line_fit(x, y, "linear")


def fit_semilog_slope(points: Iterable[tuple[float, float]]) -> RateFit:
    """Least squares line through (x, log y), the per-unit-x decay rate of geometric sequences"""
    x, y = _split(points)
    if np.any(y <= 0):
        raise PreconditionError("A semi-log fit needs positive y values")
    return _line_fit(x, np.log(y), "semilog")


def histogram_modes(samples: FloatArray, threshold: float = 0.5) -> list[float]:
    """
    Centers of the local maxima of a Freedman-Diaconis histogram that reach `threshold` times the global maximum

    A bin is a local maximum when it is strictly higher than its left neighbour and at least as high as its right one.
    Edge bins only compare with their single neighbour.
    """
    samples = np.asarray(samples, dtype=np.float64)
    counts, edges = np.histogram(samples, bins="fd")
    centers = 0.5 * (edges[:-1] + edges[1:])
    padded = np.concatenate([[-1], counts, [-1]])
    peaks = (padded[1:-1] > padded[:-2]) & (padded[1:-1] >= padded[2:])
    peaks &= counts >= threshold * counts.max()
    return [float(center) for center in centers[peaks]]
