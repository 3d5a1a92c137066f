import numpy as np
import pytest

from sysid.errors import DimensionError
from sysid.linalg.jordan import JordanSpec
from sysid.linalg.spectral import classify_modulus, is_regular, spectral_report
from sysid.utils.types import RegimeClass


@pytest.mark.parametrize(
    "rho, expected",
    [
        (0.5, RegimeClass.STABLE),
        (0.98, RegimeClass.STABLE),
        (0.995, RegimeClass.MARGINAL),
        (1.0, RegimeClass.MARGINAL),
        (1.005, RegimeClass.MARGINAL),
        (1.02, RegimeClass.EXPLOSIVE),
    ],
)
def test_classify_modulus_bands(rho: float, expected: RegimeClass) -> None:
    assert classify_modulus(rho, T=100) is expected


@pytest.mark.parametrize(
    "A, regular",
    [
        (1.1 * np.eye(2), False),
        (np.array([[1.1, 1.0], [0.0, 1.1]]), True),
        (0.5 * np.eye(3), True),
        (np.diag([1.2, 1.3]), True),
        (np.diag([1.2, 1.2, 0.5]), False),
    ],
)
def test_regularity(A: np.ndarray, regular: bool) -> None:
    assert is_regular(A) is regular


def test_report_of_mixed_system() -> None:
    report = spectral_report(np.diag([0.5, 1.0, 2.0]), T=100)
    assert report.overall == {RegimeClass.STABLE, RegimeClass.MARGINAL, RegimeClass.EXPLOSIVE}
    assert not report.is_pure
    assert report.rho_max == pytest.approx(2.0)
    assert report.rho_min == pytest.approx(0.5)
    assert report.per_eigenvalue_class == (RegimeClass.EXPLOSIVE, RegimeClass.MARGINAL, RegimeClass.STABLE)


def test_report_of_rotation_is_marginal() -> None:
    rotation = np.array([[0.0, -1.0], [1.0, 0.0]])
    report = spectral_report(rotation, T=50)
    assert report.overall == {RegimeClass.MARGINAL}
    assert report.regular


def test_report_rejects_rectangular_matrix() -> None:
    with pytest.raises(DimensionError):
        spectral_report(np.ones((2, 3)), T=10)


@pytest.mark.parametrize("seed", range(25))
def test_regularity_agrees_with_the_jordan_structure(seed: int) -> None:
    rng = np.random.default_rng(seed)
    pool = [1.5, 1.2, -1.3, 0.5, 1.0]
    n_blocks = int(rng.integers(1, 5))
    pairs = [(float(rng.choice(pool)), int(rng.integers(1, 4))) for _ in range(n_blocks)]
    spec = JordanSpec.from_pairs(pairs)
    assert is_regular(spec.matrix().real) is spec.is_regular()
