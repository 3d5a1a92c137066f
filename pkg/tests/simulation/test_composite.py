import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import linalg

from sysid.errors import PreconditionError
from sysid.linalg.jordan import JordanSpec
from sysid.linalg.spectral import is_regular
from sysid.models.system import TaggedBlock
from sysid.simulation.composite import block_slices, build_composite, random_similarity, random_stable_system
from sysid.utils.types import RegimeClass


def test_similarity_has_requested_conditioning() -> None:
    similarity = random_similarity(4, seed=3, conditioning=10.0)
    assert np.linalg.cond(similarity) == pytest.approx(10.0)
    assert_allclose(similarity, random_similarity(4, seed=3, conditioning=10.0))


def test_composite_keeps_the_block_spectrum() -> None:
    blocks = [
        TaggedBlock(JordanSpec.diagonal([0.5]), RegimeClass.STABLE),
        TaggedBlock(JordanSpec.from_pairs([(1.0, 2)]), RegimeClass.MARGINAL),
        TaggedBlock(JordanSpec.diagonal([1.5]), RegimeClass.EXPLOSIVE),
    ]
    system = build_composite(blocks, similarity_seed=1, conditioning=3.0)
    assert system.dim == 4
    assert_allclose(np.poly(system.A), np.poly([0.5, 1.0, 1.0, 1.5]), atol=1e-6)
    assert [block.tag for block in system.partition] == [RegimeClass.STABLE, RegimeClass.MARGINAL, RegimeClass.EXPLOSIVE]
    assert block_slices(system.partition) == [slice(0, 1), slice(1, 3), slice(3, 4)]


def test_conditioning_needs_a_seed() -> None:
    with pytest.raises(PreconditionError):
        build_composite([TaggedBlock(JordanSpec.diagonal([0.5]), "S0")], conditioning=2.0)


def test_random_stable_system() -> None:
    system = random_stable_system(d=3, rho_max=0.9, seed=7)
    moduli = np.abs(linalg.eigvals(system.A))
    assert moduli.max() == pytest.approx(0.9)
    assert is_regular(system.A)
    assert system.jordan_structure() is not None


def test_random_stable_system_needs_stable_radius() -> None:
    with pytest.raises(PreconditionError):
        random_stable_system(d=2, rho_max=1.2, seed=0)
