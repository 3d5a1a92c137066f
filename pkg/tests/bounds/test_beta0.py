import math

import numpy as np
import pytest
from scipy import linalg

from sysid.bounds.beta0 import beta0_rhs, solve_beta0
from sysid.bounds.constants import BoundConstants
from sysid.linalg.gramian import gramian

JORDAN_1 = np.array([[1.0, 0.5], [0.0, 1.0]])


def slack(A: np.ndarray, beta: float, rhs: float) -> float:
    """β² σ_min(Γ_⌊1/β⌋(A)) - rhs"""
    sigma = float(linalg.eigvalsh(gramian(A, math.floor(1.0 / beta)))[0])
    return beta**2 * sigma - rhs


@pytest.mark.parametrize(
    "A, T",
    [(np.array([[1.0]]), 10_000), (np.array([[0.99]]), 5_000), (JORDAN_1, 20_000), (np.diag([1.0, 1.01]), 8_000)],
)
def test_beta0_is_the_smallest_feasible_value(A: np.ndarray, T: int) -> None:
    beta0, boundary = solve_beta0(A, 0.05, T)
    rhs = beta0_rhs(A, 0.05, T, BoundConstants())
    assert not boundary and 0 < beta0 <= 1
    assert slack(A, beta0, rhs) >= -1e-12 * rhs
    assert slack(A, beta0 * (1 - 1e-4), rhs) < 0


def test_beta0_does_not_grow_with_the_horizon() -> None:
    values = [solve_beta0(np.array([[1.0]]), 0.05, T)[0] for T in (1_000, 4_000, 16_000, 64_000)]
    assert all(later <= earlier for earlier, later in zip(values, values[1:]))
    assert values[-1] < values[0]


def test_beta0_of_a_unit_root_is_the_right_hand_side() -> None:
    # σ_min(Γ_k(1)) = k + 1, so β² (⌊1/β⌋ + 1) >= rhs gives β₀ ≈ rhs = 16e c / (T R²)
    A, T = np.array([[1.0]]), 100_000
    beta0, _ = solve_beta0(A, 0.05, T)
    assert beta0 == pytest.approx(beta0_rhs(A, 0.05, T, BoundConstants()), rel=0.05)


def test_beta0_without_a_feasible_cell() -> None:
    beta0, boundary = solve_beta0(np.array([[1.0]]), 0.05, 100)
    assert (beta0, boundary) == (1.0, True)
