from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np
from scipy import linalg

from sysid.errors import DimensionError, PreconditionError, SingularMatrixError
from sysid.linalg.jordan import JordanSpec
from sysid.utils.types import ComplexArray, FloatArray, RegimeClass, as_matrix, as_vector

__all__ = ["NoiseFamily", "NoiseModel", "SystemSpec", "TaggedBlock"]


class NoiseFamily(str, Enum):
    GAUSSIAN = "gaussian_isotropic"
    SUBWEIBULL = "subweibull_truncated"


@dataclass(frozen=True)
class NoiseModel:
    """
    Distribution of the process noise η_t

    Attributes:
        family (NoiseFamily): Isotropic Gaussian or truncated symmetric sub-Weibull
        scale (float): Every draw is multiplied by this, 0 gives the zero-noise stub
        alpha (float): Sub-Weibull tail exponent α in P(|η| > y) <= b exp(-y^α / m)
        b (float): Sub-Weibull prefactor, at least 1
        m (float): Sub-Weibull tail scale
        delta_trunc (float): Tail probability δ of the truncation event
    """

    family: NoiseFamily = NoiseFamily.GAUSSIAN
    scale: float = 1.0
    alpha: float = 1.0
    b: float = 1.0
    m: float = 1.0
    delta_trunc: float = 0.05

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", NoiseFamily(self.family))
        problems = []
        if self.scale < 0:
            problems.append(f"scale must be non-negative, got {self.scale}")
        if self.alpha <= 0 or self.m <= 0:
            problems.append(f"alpha and m must be positive, got alpha={self.alpha}, m={self.m}")
        if self.b < 1:
            problems.append(f"b must be at least 1, got {self.b}")
        if not 0 < self.delta_trunc < 1:
            problems.append(f"delta_trunc must lie in (0, 1), got {self.delta_trunc}")
        if problems:
            raise PreconditionError("; ".join(problems))

    @classmethod
    def gaussian(cls, scale: float = 1.0) -> "NoiseModel":
        return cls(NoiseFamily.GAUSSIAN, scale=scale)

    @classmethod
    def zero(cls) -> "NoiseModel":
        """The zero-noise stub"""
        return cls(NoiseFamily.GAUSSIAN, scale=0.0)

    @classmethod
    def subweibull(cls, alpha: float, b: float = 1.0, m: float = 1.0, delta_trunc: float = 0.05) -> "NoiseModel":
        return cls(NoiseFamily.SUBWEIBULL, alpha=alpha, b=b, m=m, delta_trunc=delta_trunc)

    @property
    def is_zero(self) -> bool:
        return self.scale == 0.0


@dataclass(frozen=True)
class TaggedBlock:
    """One diagonal block of a composite system together with the regime it is meant to represent"""

    jordan: JordanSpec
    tag: RegimeClass

    def __post_init__(self) -> None:
        object.__setattr__(self, "tag", RegimeClass(self.tag))


class DimensionMixin:
    A: FloatArray
    B: Optional[FloatArray]

    @property
    def dim(self) -> int:
        """State dimension d"""
        return int(self.A.shape[0])

    @property
    def input_dim(self) -> int:
        """Input dimension p, 0 without control inputs"""
        return 0 if self.B is None else int(self.B.shape[1])

    @property
    def has_inputs(self) -> bool:
        return self.B is not None


@dataclass(frozen=True, eq=False)
class SystemSpec(DimensionMixin):
    """
    An LTI system X_{t+1} = A X_t + B U_t + η_{t+1}

    Attributes:
        A (FloatArray): d x d dynamics
        B (FloatArray, optional): d x p input matrix
        x0 (FloatArray): Initial state, zero by default
        jordan (JordanSpec, optional): Known Jordan structure Λ of A
        eigenvectors (ComplexArray, optional): P with A = P⁻¹ Λ P, present whenever `jordan` is
        similarity (FloatArray, optional): The real similarity P̃ used to build A, if any
        partition (tuple[TaggedBlock, ...]): Blocks of a composite system, in diagonal order
    """

    A: FloatArray
    B: Optional[FloatArray] = None
    x0: Optional[FloatArray] = None
    jordan: Optional[JordanSpec] = None
    eigenvectors: Optional[ComplexArray] = None
    similarity: Optional[FloatArray] = None
    partition: tuple[TaggedBlock, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        A = as_matrix(self.A, name="A", square=True)
        object.__setattr__(self, "A", A)
        d = A.shape[0]
        if self.B is not None:
            B = as_matrix(self.B, name="B")
            if B.shape[0] != d:
                raise DimensionError(f"B must have {d} rows to match A, got {B.shape[0]}")
            object.__setattr__(self, "B", B)
        x0 = np.zeros(d) if self.x0 is None else as_vector(self.x0, d, name="x0")
        object.__setattr__(self, "x0", x0)
        if self.jordan is not None:
            if self.jordan.dim != d:
                raise DimensionError(f"Jordan structure has dimension {self.jordan.dim}, A has {d}")
            if self.eigenvectors is None:
                raise PreconditionError("A Jordan structure needs the matching eigenvector matrix P")
        if self.eigenvectors is not None and np.shape(self.eigenvectors) != (d, d):
            raise DimensionError(f"Eigenvector matrix must be {d} x {d}, got {np.shape(self.eigenvectors)}")

    @property
    def initial_state(self) -> FloatArray:
        assert self.x0 is not None
        return self.x0

    @classmethod
    def from_matrix(cls, A: Any, B: Any = None, x0: Any = None) -> "SystemSpec":
        """A system without recorded structure"""
        return cls(A=as_matrix(A, name="A", square=True), B=None if B is None else as_matrix(B, name="B"), x0=x0)

    @classmethod
    def from_jordan(
        cls,
        spec: JordanSpec,
        similarity: Optional[FloatArray] = None,
        B: Optional[FloatArray] = None,
        partition: tuple[TaggedBlock, ...] = (),
    ) -> "SystemSpec":
        """
        Build A = P̃⁻¹ Λ_real P̃ from a Jordan structure

        The complex eigenvector matrix P = Q⁻¹ P̃ (with Λ_real = Q Λ Q⁻¹) is recorded so that A = P⁻¹ Λ P.

        Args:
            spec (JordanSpec): Λ, complex blocks in conjugate pairs
            similarity (FloatArray, optional): Real invertible P̃, the identity by default
            B (FloatArray, optional): Input matrix
            partition (tuple[TaggedBlock, ...]): Composite blocks, recorded as given

        Examples:
            >>> SystemSpec.from_jordan(JordanSpec.from_pairs([(1.5, 2)])).A
            array([[1.5, 1. ],
                   [0. , 1.5]])
        """
        real_form, change = spec.real_form()
        d = spec.dim
        similarity = np.eye(d) if similarity is None else as_matrix(similarity, name="similarity", square=True)
        if similarity.shape != (d, d):
            raise DimensionError(f"Similarity must be {d} x {d}, got {similarity.shape}")
        try:
            A = linalg.solve(similarity, real_form @ similarity)
            eigenvectors = linalg.solve(change, similarity.astype(np.complex128))
        except linalg.LinAlgError as error:
            raise SingularMatrixError("Similarity transform is singular") from error
        return cls(
            A=np.asarray(A, dtype=np.float64),
            B=B,
            jordan=spec,
            eigenvectors=eigenvectors,
            similarity=similarity,
            partition=tuple(partition),
        )

    def jordan_structure(self) -> Optional[tuple[JordanSpec, ComplexArray]]:
        """
        The Jordan structure and eigenvector matrix, if known

        Diagonal matrices (1 x 1 included) are recognized without a recorded structure.
        """
        if self.jordan is not None and self.eigenvectors is not None:
            return self.jordan, self.eigenvectors
        if np.count_nonzero(self.A - np.diag(np.diag(self.A))) == 0:
            return JordanSpec.diagonal(np.diag(self.A)), np.eye(self.dim, dtype=np.complex128)
        return None

    def with_inputs(self, B: Optional[FloatArray]) -> "SystemSpec":
        """Copy with another input matrix"""
        return SystemSpec(
            A=self.A,
            B=B,
            x0=self.x0,
            jordan=self.jordan,
            eigenvectors=self.eigenvectors,
            similarity=self.similarity,
            partition=self.partition,
        )
