import logging
from typing import Optional, Sequence

import numpy as np
from scipy.stats import ortho_group

from sysid.errors import DimensionError, PreconditionError
from sysid.linalg.jordan import JordanBlock, JordanSpec
from sysid.models.system import SystemSpec, TaggedBlock
from sysid.simulation.rng import stream
from sysid.utils.types import FloatArray, RegimeClass

__all__ = ["build_composite", "block_slices", "random_similarity", "random_stable_system"]

logger = logging.getLogger(__name__)

SIMILARITY_KEY = 0x5117
STABLE_SYSTEM_KEY = 0x57AB


def random_similarity(d: int, seed: int, conditioning: float) -> FloatArray:
    """
    Seeded random real matrix U diag(1, ..., 1/κ) V' with Haar orthogonal U, V and condition number κ

    The singular values are spaced geometrically between 1 and 1/κ.
    """
    if conditioning < 1:
        raise PreconditionError(f"Conditioning must be at least 1, got {conditioning}")
    if d == 1:
        if conditioning != 1:
            raise PreconditionError("A 1 x 1 similarity always has condition number 1")
        return np.eye(1)
    rng = stream(seed, SIMILARITY_KEY)
    left = ortho_group.rvs(d, random_state=rng)
    right = ortho_group.rvs(d, random_state=rng)
    singular_values = np.geomspace(1.0, 1.0 / conditioning, d)
    return np.asarray(left @ np.diag(singular_values) @ right.T)


def block_slices(partition: Sequence[TaggedBlock]) -> list[slice]:
    """Coordinate ranges of the blocks of a composite system, in the basis before the similarity"""
    offsets = np.cumsum([0, *(block.jordan.dim for block in partition)])
    return [slice(int(start), int(stop)) for start, stop in zip(offsets[:-1], offsets[1:])]


def build_composite(
    blocks: Sequence[TaggedBlock], similarity_seed: Optional[int] = None, conditioning: float = 1.0
) -> SystemSpec:
    """
    A = P̃⁻¹ diag(blocks) P̃ for tagged Jordan blocks

    Args:
        blocks (Sequence[TaggedBlock]): The diagonal blocks, complex eigenvalues in conjugate pairs within a block
        similarity_seed (int, optional): Seed of P̃. Without it P̃ is the identity
        conditioning (float): Condition number of P̃, at least 1

    Returns:
        SystemSpec: The system with its Jordan structure, eigenvectors, P̃ and partition recorded

    Examples:
        >>> blocks = [TaggedBlock(JordanSpec.diagonal([0.5]), "S0"), TaggedBlock(JordanSpec.diagonal([1.5]), "S2")]
        >>> build_composite(blocks).A
        array([[0.5, 0. ],
               [0. , 1.5]])
    """
    if not blocks:
        raise DimensionError("A composite system needs at least one block")
    if conditioning < 1:
        raise PreconditionError(f"Conditioning must be at least 1, got {conditioning}")
    for block in blocks:
        # conjugate pairs must not straddle two blocks
        block.jordan.real_form()
    jordan = JordanSpec(tuple(jordan_block for block in blocks for jordan_block in block.jordan.blocks))
    if similarity_seed is None:
        if conditioning != 1:
            raise PreconditionError("A similarity seed is needed for conditioning above 1")
        similarity = np.eye(jordan.dim)
    else:
        similarity = random_similarity(jordan.dim, similarity_seed, conditioning)
    logger.debug("composite system of dimension %d from %d blocks", jordan.dim, len(blocks))
    return SystemSpec.from_jordan(jordan, similarity, partition=tuple(blocks))


def random_stable_system(d: int, rho_max: float, seed: int, conditioning: float = 2.0) -> SystemSpec:
    """
    Random diagonalizable system with real eigenvalues, the largest of modulus exactly `rho_max`

    The remaining eigenvalues are uniform in (-rho_max, rho_max) with random signs, and the eigenbasis is a random
    similarity with the given condition number.
    """
    if not 0 < rho_max < 1:
        raise PreconditionError(f"rho_max must lie in (0, 1), got {rho_max}")
    rng = stream(seed, STABLE_SYSTEM_KEY)
    others = rng.uniform(-rho_max, rho_max, size=d - 1)
    jordan = JordanSpec(tuple(JordanBlock(value, 1) for value in [rho_max, *others]))
    similarity = random_similarity(d, seed, conditioning if d > 1 else 1.0)
    return SystemSpec.from_jordan(
        jordan, similarity, partition=(TaggedBlock(jordan, RegimeClass.STABLE),)
    )
