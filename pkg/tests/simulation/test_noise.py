import numpy as np
import pytest
from numpy.testing import assert_allclose

from sysid.errors import PreconditionError
from sysid.models.system import NoiseModel
from sysid.simulation.noise import GaussianSampler, SubWeibullSampler, make_sampler, subweibull_truncation_threshold
from sysid.simulation.rng import stream


def test_sampler_follows_family() -> None:
    assert isinstance(make_sampler(NoiseModel(), 10, 2), GaussianSampler)
    assert isinstance(make_sampler(NoiseModel.subweibull(alpha=1.0), 10, 2), SubWeibullSampler)


def test_scale_multiplies_every_draw() -> None:
    unit = make_sampler(NoiseModel(), 100, 3).sample(stream(9))
    scaled = make_sampler(NoiseModel.gaussian(scale=2.5), 100, 3).sample(stream(9))
    assert_allclose(scaled, 2.5 * unit)


def test_zero_noise_stub() -> None:
    assert not make_sampler(NoiseModel.zero(), 7, 2).sample(stream(0)).any()


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_subweibull_draws_stay_below_threshold(alpha: float) -> None:
    model = NoiseModel.subweibull(alpha=alpha, delta_trunc=0.1)
    draws = make_sampler(model, 500, 2).sample(stream(4))
    threshold = subweibull_truncation_threshold(alpha, model.b, model.m, 500, 2, 0.1)
    assert np.abs(draws).max() <= threshold


def test_threshold_needs_valid_delta() -> None:
    with pytest.raises(PreconditionError):
        subweibull_truncation_threshold(1.0, 1.0, 1.0, 10, 1, 1.5)


def test_noise_model_validation() -> None:
    with pytest.raises(PreconditionError, match="scale"):
        NoiseModel.gaussian(scale=-1.0)
    with pytest.raises(PreconditionError, match="b must be at least 1"):
        NoiseModel.subweibull(alpha=1.0, b=0.5)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_subweibull_noise_has_zero_mean(alpha: float) -> None:
    draws = make_sampler(NoiseModel.subweibull(alpha=alpha), 20000, 1).sample(stream(21)).ravel()
    band = 5.0 * draws.std() / np.sqrt(draws.size)
    assert abs(draws.mean()) < band
