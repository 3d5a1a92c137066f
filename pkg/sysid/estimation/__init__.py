# ruff: noqa: F401
from .diagnostics import explosive_pair, gap_bound, selfnorm_statistic, symmetric_inverse_sqrt, tight_gap_bound
from .ols import covariance_and_martingale, estimation_error, ols_estimate, scaled_sums

__all__ = [
    "covariance_and_martingale",
    "estimation_error",
    "explosive_pair",
    "gap_bound",
    "ols_estimate",
    "scaled_sums",
    "selfnorm_statistic",
    "symmetric_inverse_sqrt",
    "tight_gap_bound",
]
