import logging
import math
from abc import ABCMeta, abstractmethod

import numpy as np

from sysid.errors import NumericError, PreconditionError
from sysid.models.system import NoiseFamily, NoiseModel
from sysid.utils.types import FloatArray

__all__ = ["GaussianSampler", "NoiseSampler", "SubWeibullSampler", "make_sampler", "subweibull_truncation_threshold"]

logger = logging.getLogger(__name__)

MAX_REDRAWS = 1_000


def subweibull_truncation_threshold(alpha: float, b: float, m: float, T: int, d: int, delta: float) -> float:
    """
    ν_T(δ) = (m log(b T d / δ))^{1/α}

    With probability at least 1 - δ none of the T * d coordinates of a sub-Weibull noise sequence exceeds it.

    Examples:
        >>> round(subweibull_truncation_threshold(1, 1, 1, 100, 1, 0.1), 4)
        6.9078
    """
    if not 0 < delta < 1:
        raise PreconditionError(f"delta must lie in (0, 1), got {delta}")
    if min(alpha, b, m) <= 0 or T < 1 or d < 1:
        raise PreconditionError("alpha, b, m must be positive and T, d at least 1")
    return float((m * math.log(b * T * d / delta)) ** (1.0 / alpha))


class NoiseSampler(metaclass=ABCMeta):
    """
    Draws the noise sequence η_1 .. η_T of one trajectory

    Args:
        model (NoiseModel): The noise distribution
        T (int): Horizon, needed by truncated samplers
        d (int): State dimension
    """

    def __init__(self, model: NoiseModel, T: int, d: int) -> None:
        self.model = model
        self.T = T
        self.d = d

    def sample(self, rng: np.random.Generator) -> FloatArray:
        """T x d noise matrix, all zeros for the zero-noise stub"""
        if self.model.is_zero:
            return np.zeros((self.T, self.d))
        return self.model.scale * self._draw(rng, (self.T, self.d))

    @abstractmethod
    def _draw(self, rng: np.random.Generator, shape: tuple[int, int]) -> FloatArray:
        """Unit scale draws of the given shape"""
        ...


class GaussianSampler(NoiseSampler):
    """Isotropic standard normal coordinates"""

    def _draw(self, rng: np.random.Generator, shape: tuple[int, int]) -> FloatArray:
        return rng.standard_normal(shape)


class SubWeibullSampler(NoiseSampler):
    """
    Symmetric sub-Weibull coordinates truncated at ν_T(δ)

    |η| = (m E)^{1/α} with E standard exponential has tail exactly exp(-y^α / m); draws above the threshold are
    redrawn, and an independent random sign keeps the law symmetric so the truncated noise still has mean zero.
    """

    def __init__(self, model: NoiseModel, T: int, d: int) -> None:
        super().__init__(model, T, d)
        self.threshold = subweibull_truncation_threshold(model.alpha, model.b, model.m, T, d, model.delta_trunc)

    def _magnitudes(self, rng: np.random.Generator, size: int) -> FloatArray:
        return np.asarray((self.model.m * rng.standard_exponential(size)) ** (1.0 / self.model.alpha))

    def _draw(self, rng: np.random.Generator, shape: tuple[int, int]) -> FloatArray:
        magnitudes = self._magnitudes(rng, shape[0] * shape[1])
        for _ in range(MAX_REDRAWS):
            outside = magnitudes > self.threshold
            if not outside.any():
                break
            magnitudes[outside] = self._magnitudes(rng, int(outside.sum()))
        else:
            raise NumericError("Sub-Weibull truncation did not terminate", {"threshold": self.threshold})
        signs = rng.integers(0, 2, size=magnitudes.size) * 2.0 - 1.0
        return (signs * magnitudes).reshape(shape)


def make_sampler(model: NoiseModel, T: int, d: int) -> NoiseSampler:
    """Sampler matching the model's family"""
    sampler: NoiseSampler
    match model.family:
        case NoiseFamily.SUBWEIBULL:
            sampler = SubWeibullSampler(model, T, d)
        case _:
            sampler = GaussianSampler(model, T, d)
    return sampler
