import math

import numpy as np
import pytest

from sysid.errors import PreconditionError
from sysid.experiments.fitting import fit_linear_slope, fit_loglog_slope, fit_semilog_slope, histogram_modes
from sysid.simulation.rng import stream


def test_square_root_decay() -> None:
    fit = fit_loglog_slope((x, x**-0.5) for x in (10.0, 100.0, 1000.0))
    assert fit.slope == pytest.approx(-0.5)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.kind == "loglog"


def test_constant_has_zero_slope() -> None:
    fit = fit_loglog_slope([(1.0, 2.0), (5.0, 2.0), (9.0, 2.0)])
    assert fit.slope == pytest.approx(0.0, abs=1e-12)
    assert fit.r_squared == 1.0


def test_inverse_law_intercept() -> None:
    fit = fit_loglog_slope((x, 3.0 / x) for x in (1.0, 2.0, 4.0, 8.0))
    assert fit.slope == pytest.approx(-1.0)
    assert fit.intercept == pytest.approx(math.log(3.0))


def test_semilog_reads_the_decay_rate() -> None:
    fit = fit_semilog_slope((T, 1.5**-T) for T in (10.0, 20.0, 30.0))
    assert fit.slope == pytest.approx(-math.log(1.5))
    assert fit.kind == "semilog"


def test_linear_fit() -> None:
    fit = fit_linear_slope([(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)])
    assert (fit.slope, fit.intercept) == pytest.approx((2.0, 1.0))


def test_noisy_fit_has_r_squared_in_the_unit_interval() -> None:
    rng = stream(3)
    fit = fit_loglog_slope((x, x**-0.5 * math.exp(rng.normal(scale=0.3))) for x in (10.0, 20.0, 40.0, 80.0))
    assert 0.0 <= fit.r_squared <= 1.0


@pytest.mark.parametrize(
    "points",
    [[(0.0, 1.0), (1.0, 1.0)], [(1.0, -1.0), (2.0, 1.0)], [(1.0, 1.0), (1.0, 2.0)]],
)
def test_bad_loglog_input(points: list[tuple[float, float]]) -> None:
    with pytest.raises(PreconditionError):
        fit_loglog_slope(points)


def test_semilog_needs_positive_values() -> None:
    with pytest.raises(PreconditionError):
        fit_semilog_slope([(1.0, 0.0), (2.0, 1.0)])


def test_modes_of_a_symmetric_mixture() -> None:
    rng = stream(11)
    samples = np.concatenate([rng.normal(-0.55, 0.1, 1000), rng.normal(0.55, 0.1, 1000)])
    modes = histogram_modes(samples)
    assert len(modes) == 2
    assert modes[0] == pytest.approx(-0.55, abs=0.15)
    assert modes[1] == pytest.approx(0.55, abs=0.15)


def test_single_mode() -> None:
    modes = histogram_modes(stream(2).normal(size=5000))
    assert len(modes) == 1 and abs(modes[0]) < 0.5
