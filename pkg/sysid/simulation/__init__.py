# ruff: noqa: F401
from .composite import block_slices, build_composite, random_similarity, random_stable_system
from .noise import GaussianSampler, NoiseSampler, SubWeibullSampler, make_sampler, subweibull_truncation_threshold
from .rng import cell_stream, stream
from .simulate import (
    DEFAULT_OVERFLOW_LOG_CAP,
    augment_control,
    draw_sequences,
    predicted_log_magnitude,
    simulate,
    simulate_scaled,
    unscale,
)

__all__ = [
    "DEFAULT_OVERFLOW_LOG_CAP",
    "GaussianSampler",
    "NoiseSampler",
    "SubWeibullSampler",
    "augment_control",
    "block_slices",
    "build_composite",
    "cell_stream",
    "draw_sequences",
    "make_sampler",
    "predicted_log_magnitude",
    "random_similarity",
    "random_stable_system",
    "simulate",
    "simulate_scaled",
    "stream",
    "subweibull_truncation_threshold",
    "unscale",
]
