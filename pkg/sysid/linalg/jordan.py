from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy import linalg

from sysid.errors import DimensionError, PreconditionError, SingularMatrixError
from sysid.utils.types import ComplexArray, FloatArray

__all__ = ["JordanBlock", "JordanSpec", "jordan_block", "jordan_inverse_power"]

CONJUGATE_TOL = 1e-12
"""Two eigenvalues closer than this are treated as equal when pairing or counting blocks."""


def jordan_block(eigenvalue: complex, d: int) -> ComplexArray:
    """
    Jordan block J_d(λ): λ on the diagonal, ones on the first superdiagonal.

    Args:
        eigenvalue (complex): The eigenvalue λ
        d (int): Block size

    Returns:
        ComplexArray: The d x d block

    Examples:
        >>> jordan_block(3, 2).real
        array([[3., 1.],
               [0., 3.]])
    """
    if d < 1:
        raise DimensionError(f"A Jordan block needs a positive size, got {d}")
    return complex(eigenvalue) * np.eye(d, dtype=np.complex128) + np.eye(d, k=1, dtype=np.complex128)


@dataclass(frozen=True)
class JordanBlock:
    """
    One block of a Jordan structure

    Attributes:
        eigenvalue (complex): The block's eigenvalue
        size (int): The block's size
    """

    eigenvalue: complex
    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise DimensionError(f"A Jordan block needs a positive size, got {self.size}")
        object.__setattr__(self, "eigenvalue", complex(self.eigenvalue))

    @property
    def modulus(self) -> float:
        return abs(self.eigenvalue)

    @property
    def is_real(self) -> bool:
        return self.eigenvalue.imag == 0.0


@dataclass(frozen=True)
class JordanSpec:
    """
    A Jordan structure Λ = diag(J_{k_1}(λ_1), ..., J_{k_m}(λ_m)) known by construction.

    Nothing in sysid computes a Jordan decomposition of an arbitrary matrix, systems are built from a JordanSpec
    instead so their structure is exact.

    Attributes:
        blocks (tuple[JordanBlock, ...]): The blocks in diagonal order
    """

    blocks: tuple[JordanBlock, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.blocks:
            raise DimensionError("A JordanSpec needs at least one block")
        object.__setattr__(self, "blocks", tuple(self.blocks))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[complex, int]]) -> "JordanSpec":
        """
        Build a spec from (eigenvalue, size) pairs

        Examples:
            >>> JordanSpec.from_pairs([(1.5, 2), (0.5, 1)]).dim
            3
        """
        return cls(tuple(JordanBlock(eigenvalue, size) for eigenvalue, size in pairs))

    @classmethod
    def diagonal(cls, eigenvalues: Iterable[complex]) -> "JordanSpec":
        """A spec made of 1x1 blocks only"""
        return cls.from_pairs((eigenvalue, 1) for eigenvalue in eigenvalues)

    @property
    def dim(self) -> int:
        """The ambient dimension d (sum of block sizes)"""
        return sum(block.size for block in self.blocks)

    @property
    def is_real(self) -> bool:
        return all(block.is_real for block in self.blocks)

    def eigenvalues(self) -> ComplexArray:
        """All eigenvalues repeated by algebraic multiplicity, in diagonal order"""
        return np.array([block.eigenvalue for block in self.blocks for _ in range(block.size)], dtype=np.complex128)

    def moduli(self) -> FloatArray:
        """Eigenvalue moduli sorted descending"""
        return np.sort(np.abs(self.eigenvalues()))[::-1].astype(np.float64)

    def matrix(self) -> ComplexArray:
        """The complex block diagonal matrix Λ"""
        return np.asarray(
            linalg.block_diag(*(jordan_block(block.eigenvalue, block.size) for block in self.blocks)),
            dtype=np.complex128,
        )

    def is_regular(self) -> bool:
        """
        Combinatorial regularity: at most one block per eigenvalue of modulus greater than one

        Examples:
            >>> JordanSpec.from_pairs([(1.1, 1), (1.1, 1)]).is_regular()
            False
            >>> JordanSpec.from_pairs([(1.1, 2)]).is_regular()
            True
        """
        explosive = [block.eigenvalue for block in self.blocks if block.modulus > 1.0]
        for index, eigenvalue in enumerate(explosive):
            if any(abs(eigenvalue - other) <= CONJUGATE_TOL for other in explosive[index + 1 :]):
                return False
        return True

    def real_form(self) -> tuple[FloatArray, ComplexArray]:
        """
        Real block form of Λ and the change of basis Q with Λ_real = Q Λ Q⁻¹

        Real blocks are kept as they are. A block J_k(a + ib) together with its partner J_k(a - ib) becomes the real
        chain I_k ⊗ [[a, b], [-b, a]] + N_k ⊗ I_2 on 2k consecutive coordinates. Partners may appear anywhere in the
        spec but must have the same size.

        Returns:
            tuple[FloatArray, ComplexArray]: Λ_real and Q, both d x d

        Raises:
            PreconditionError: A complex block has no conjugate partner
        """
        offsets = np.cumsum([0, *(block.size for block in self.blocks)])
        real_blocks: list[FloatArray] = []
        q = np.zeros((self.dim, self.dim), dtype=np.complex128)
        used: set[int] = set()
        row = 0
        for index, block in enumerate(self.blocks):
            if index in used:
                continue
            used.add(index)
            size, start = block.size, offsets[index]
            if block.is_real:
                real_blocks.append(jordan_block(block.eigenvalue, size).real)
                q[row : row + size, start : start + size] = np.eye(size)
                row += size
                continue

            partner = next(
                (
                    other
                    for other in range(index + 1, len(self.blocks))
                    if other not in used
                    and self.blocks[other].size == size
                    and abs(self.blocks[other].eigenvalue - block.eigenvalue.conjugate()) <= CONJUGATE_TOL
                ),
                None,
            )
            if partner is None:
                raise PreconditionError(
                    f"Block J_{size}({block.eigenvalue}) has no conjugate partner, the matrix cannot be real"
                )
            used.add(partner)
            upper, lower = (index, partner) if block.eigenvalue.imag > 0 else (partner, index)
            a, b = self.blocks[upper].eigenvalue.real, self.blocks[upper].eigenvalue.imag
            rotation = np.array([[a, b], [-b, a]])
            real_blocks.append(np.kron(np.eye(size), rotation) + np.kron(np.eye(size, k=1), np.eye(2)))
            for m in range(size):
                q[row + 2 * m, offsets[upper] + m] = 1.0
                q[row + 2 * m + 1, offsets[upper] + m] = 1.0j
                q[row + 2 * m, offsets[lower] + m] = 1.0
                q[row + 2 * m + 1, offsets[lower] + m] = -1.0j
            row += 2 * size

        return np.asarray(linalg.block_diag(*real_blocks), dtype=np.float64), q


def jordan_inverse_power(spec: JordanSpec, k: int) -> ComplexArray:
    """
    Λ^{-k} for the block diagonal Λ of `spec`

    Uses the closed form of J_d(λ)^{-1}, whose j-th superdiagonal equals (-1)^j λ^{-(j+1)}.

    Raises:
        SingularMatrixError: Some eigenvalue is zero
    """
    if k < 0:
        raise PreconditionError(f"Power must be non-negative, got {k}")
    inverses = []
    for block in spec.blocks:
        if block.eigenvalue == 0:
            raise SingularMatrixError("Λ is singular: zero eigenvalue in the Jordan structure")
        inverse = sum(
            ((-1) ** j) * block.eigenvalue ** (-(j + 1)) * np.eye(block.size, k=j, dtype=np.complex128)
            for j in range(block.size)
        )
        inverses.append(np.linalg.matrix_power(inverse, k))
    return np.asarray(linalg.block_diag(*inverses), dtype=np.complex128)
