import math

import numpy as np
import pytest

from sysid.bounds.constants import BoundConstants
from sysid.bounds.regime import log_norm_power, minimax_lower_bound_1d, regime_error_bound
from sysid.errors import IrregularSystemError, PreconditionError, RegimeError
from sysid.linalg.jordan import JordanSpec
from sysid.models.system import SystemSpec, TaggedBlock
from sysid.simulation.composite import build_composite
from sysid.utils.types import RegimeClass


def test_stable_bound_halves_when_the_horizon_quadruples() -> None:
    A = 0.5 * np.eye(2)
    short, long = regime_error_bound(A, 0.05, 1000), regime_error_bound(A, 0.05, 4000)
    assert short.regime == "S0" and short.rate_class == "1/sqrt(T)"
    assert short.error_upper_bound is not None and long.error_upper_bound is not None
    assert long.error_upper_bound / short.error_upper_bound == pytest.approx(0.5, rel=1e-6)
    assert short.notation is not None and "psi_hat" in short.notation.absent


def test_stable_bound_notes_short_horizons() -> None:
    report = regime_error_bound(np.array([[0.2]]), 0.05, 2, BoundConstants(universal_C=100.0))
    assert not report.min_T_ok
    assert any("below the required horizon" in note for note in report.assumptions_violated)


def test_marginal_bound() -> None:
    report = regime_error_bound(np.eye(2), 0.05, 1000)
    assert report.regime == "S1" and report.rate_class == "1/T"
    assert report.error_upper_bound is not None and report.error_upper_bound > 0
    assert math.isfinite(report.error_upper_bound)


def test_scalar_explosive_bound_carries_the_lower_bound() -> None:
    report = regime_error_bound(np.array([[1.5]]), 0.05, 40)
    assert report.regime == "S2" and report.rate_class == "rho^-T"
    assert report.lower_bound_1d is not None and report.lower_bound_1d.value > 0
    assert report.notation is not None and report.notation.psi_hat is not None and report.notation.psi_hat > 0
    assert report.error_upper_bound is not None and report.error_upper_bound > 0


def test_irregular_explosive_system_is_refused() -> None:
    with pytest.raises(IrregularSystemError, match="inconsistent"):
        regime_error_bound(1.1 * np.eye(2), 0.05, 100)


def test_explosive_bound_needs_the_jordan_structure() -> None:
    with pytest.raises(RegimeError):
        regime_error_bound(np.array([[1.5, 0.3], [0.1, 1.6]]), 0.05, 50)


def test_mixed_system_without_partition() -> None:
    report = regime_error_bound(np.diag([0.5, 1.5]), 0.05, 100)
    assert report.regime == "S0+S2" and report.rate_class == "mixed-polylog"
    assert report.error_upper_bound is None
    assert report.assumptions_violated


def test_mixed_composite_reports_each_block() -> None:
    system = build_composite(
        [
            TaggedBlock(JordanSpec.diagonal([0.5]), RegimeClass.STABLE),
            TaggedBlock(JordanSpec.diagonal([1.5]), RegimeClass.EXPLOSIVE),
        ]
    )
    report = regime_error_bound(system, 0.05, 100)
    assert [block.regime for block in report.block_bounds] == ["S0", "S2"]
    assert all(block.error_upper_bound is not None for block in report.block_bounds)


def test_delta_is_validated() -> None:
    with pytest.raises(PreconditionError):
        regime_error_bound(0.5 * np.eye(2), 1.0, 100)


@pytest.mark.parametrize(("T", "branch"), [(20, 1), (200, 2)])
def test_minimax_branches(T: int, branch: int) -> None:
    bound = minimax_lower_bound_1d(1.5, 0.05, T)
    assert bound.branch == branch
    assert bound.value > 0


def test_minimax_second_branch_decays_geometrically() -> None:
    ratio = minimax_lower_bound_1d(1.5, 0.05, 201).value / minimax_lower_bound_1d(1.5, 0.05, 200).value
    assert ratio == pytest.approx(1 / 1.5)


def test_minimax_needs_clearly_explosive_a() -> None:
    with pytest.raises(PreconditionError):
        minimax_lower_bound_1d(1.05, 0.05, 100)


def test_log_norm_power() -> None:
    M = np.array([[1.2, 1.0], [0.0, 0.7]])
    for k in (1, 5, 12):
        assert log_norm_power(M, k) == pytest.approx(math.log(np.linalg.norm(np.linalg.matrix_power(M, k), 2)))
    assert log_norm_power(np.array([[1.5]]), 5000) == pytest.approx(5000 * math.log(1.5))
    assert log_norm_power(np.zeros((2, 2)), 3) == -math.inf


@pytest.mark.parametrize("a, T", [(1.2, 120), (1.2, 200), (1.5, 60), (1.5, 120), (2.0, 30), (2.0, 80)])
@pytest.mark.parametrize("delta", [0.05, 0.1])
def test_explosive_upper_bound_dominates_the_lower_bound(a: float, T: int, delta: float) -> None:
    report = regime_error_bound(np.array([[a]]), delta, T, BoundConstants(psi_samples=1000))
    assert report.rate_class == "rho^-T"
    assert report.error_upper_bound is not None and report.lower_bound_1d is not None
    assert report.lower_bound_1d.branch == 2
    assert math.log(report.error_upper_bound) >= math.log(report.lower_bound_1d.value) - 1e-9
