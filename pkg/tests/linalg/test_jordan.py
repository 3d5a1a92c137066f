import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import linalg

from sysid.errors import DimensionError, PreconditionError, SingularMatrixError
from sysid.linalg.jordan import JordanBlock, JordanSpec, jordan_block, jordan_inverse_power


def test_block_layout() -> None:
    block = jordan_block(2.0, 3)
    assert_allclose(np.diag(block), [2.0, 2.0, 2.0])
    assert_allclose(np.diag(block, k=1), [1.0, 1.0])
    assert np.count_nonzero(np.triu(block, k=2)) == 0


def test_block_needs_positive_size() -> None:
    with pytest.raises(DimensionError):
        JordanBlock(1.0, 0)


def test_spec_needs_a_block() -> None:
    with pytest.raises(DimensionError):
        JordanSpec(())


@pytest.mark.parametrize("k", [0, 1, 4, 9])
def test_inverse_power_matches_matrix_power(k: int) -> None:
    spec = JordanSpec.from_pairs([(1.5, 3), (-0.7, 1)])
    expected = np.linalg.matrix_power(linalg.inv(spec.matrix()), k)
    assert_allclose(jordan_inverse_power(spec, k), expected, rtol=1e-12, atol=1e-14)


def test_inverse_power_of_singular_structure() -> None:
    with pytest.raises(SingularMatrixError):
        jordan_inverse_power(JordanSpec.diagonal([0.0, 1.0]), 2)


def test_real_form_keeps_the_spectrum() -> None:
    spec = JordanSpec.from_pairs([(complex(1.2, 0.5), 2), (0.3, 1), (complex(1.2, -0.5), 2)])
    real_form, change = spec.real_form()
    assert np.isrealobj(real_form)
    assert_allclose(change @ spec.matrix() @ linalg.inv(change), real_form, atol=1e-12)
    assert_allclose(np.poly(real_form), np.poly(spec.eigenvalues()).real, atol=1e-8)


def test_real_form_needs_conjugate_partners() -> None:
    with pytest.raises(PreconditionError):
        JordanSpec.from_pairs([(complex(1.0, 1.0), 1)]).real_form()


def test_moduli_sorted_descending() -> None:
    spec = JordanSpec.from_pairs([(0.5, 1), (complex(0.0, 2.0), 1), (complex(0.0, -2.0), 1)])
    assert_allclose(spec.moduli(), [2.0, 2.0, 0.5])
    assert not spec.is_real
    assert spec.dim == 3


@pytest.mark.parametrize("eigenvalue", [2.0, 1.5, -1.2])
@pytest.mark.parametrize("size", [1, 2, 3, 4])
@pytest.mark.parametrize("t", [1, 2, 5])
def test_inverse_power_of_a_block_has_binomial_superdiagonals(eigenvalue: float, size: int, t: int) -> None:
    power = jordan_inverse_power(JordanSpec.from_pairs([(eigenvalue, size)]), t)
    assert np.count_nonzero(np.tril(power, k=-1)) == 0
    for k in range(size):
        # (λI + N)^{-t} = Σ_k binom(-t, k) λ^{-t-k} N^k
        expected = math.comb(t + k - 1, k) * (-1) ** k * eigenvalue ** (-t - k)
        assert_allclose(np.diag(power, k=k), np.full(size - k, expected), rtol=1e-10)
