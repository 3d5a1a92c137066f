import numpy as np
import pytest
from numpy.testing import assert_allclose

from sysid.errors import DimensionError, NumericError
from sysid.linalg.pinv import pseudo_inverse, pseudo_inverse_with_spectrum


@pytest.mark.parametrize("shape", [(5, 3), (3, 5), (4, 4)])
def test_moore_penrose_conditions(rng: np.random.Generator, shape: tuple[int, int]) -> None:
    M = rng.standard_normal(shape)
    P = pseudo_inverse(M)
    assert_allclose(M @ P @ M, M, atol=1e-10)
    assert_allclose(P @ M @ P, P, atol=1e-10)
    assert_allclose((M @ P).T, M @ P, atol=1e-10)
    assert_allclose((P @ M).T, P @ M, atol=1e-10)


def test_rank_and_spectrum_of_deficient_matrix(rng: np.random.Generator) -> None:
    left, right = rng.standard_normal((6, 2)), rng.standard_normal((2, 4))
    _, singular_values, rank = pseudo_inverse_with_spectrum(left @ right)
    assert rank == 2
    assert np.all(np.diff(singular_values) <= 0)


def test_zero_matrix() -> None:
    inverse, _, rank = pseudo_inverse_with_spectrum(np.zeros((3, 2)))
    assert rank == 0
    assert_allclose(inverse, np.zeros((2, 3)))


def test_loose_cutoff_drops_small_directions() -> None:
    _, _, rank = pseudo_inverse_with_spectrum(np.diag([1.0, 1e-9]), rel_tol=1e-6)
    assert rank == 1


def test_non_finite_input() -> None:
    with pytest.raises(NumericError):
        pseudo_inverse(np.array([[np.nan]]))


def test_empty_input() -> None:
    with pytest.raises(DimensionError):
        pseudo_inverse(np.zeros((0, 2)))


def test_moore_penrose_conditions_on_many_matrices(rng: np.random.Generator) -> None:
    for index in range(100):
        rows, cols = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        if index % 2:
            inner = int(rng.integers(1, min(rows, cols) + 1))
            M = rng.standard_normal((rows, inner)) @ rng.standard_normal((inner, cols))
        else:
            M = rng.standard_normal((rows, cols))
        P = pseudo_inverse(M, rel_tol=1e-10)
        scale = max(1.0, float(np.linalg.norm(M, 2)) * float(np.linalg.norm(P, 2)))
        assert P.shape == (cols, rows)
        assert_allclose(M @ P @ M, M, atol=1e-9 * scale * max(1.0, float(np.abs(M).max())))
        assert_allclose(P @ M @ P, P, atol=1e-9 * scale * max(1.0, float(np.abs(P).max())))
        assert_allclose((M @ P).T, M @ P, atol=1e-9 * scale)
        assert_allclose((P @ M).T, P @ M, atol=1e-9 * scale)
