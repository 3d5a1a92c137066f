from enum import Enum
from pathlib import Path
from typing import Any, Union

import numpy as np
import numpy.typing as npt

from sysid.errors import DimensionError, NumericError

FloatArray = npt.NDArray[np.float64]
"""A real dense array, used for matrices, vectors and trajectories."""

ComplexArray = npt.NDArray[np.complex128]
"""A complex dense array, only used for spectral intermediates such as Jordan blocks."""

FilePath = Union[str, Path]
"""A filepath either as string or as pathlib.Path object."""


class RegimeClass(str, Enum):
    """Spectral class of an eigenvalue modulus relative to the horizon T"""

    STABLE = "S0"
    MARGINAL = "S1"
    EXPLOSIVE = "S2"


def as_matrix(value: Any, name: str = "matrix", square: bool = False) -> FloatArray:
    """
    Convert `value` to a finite two-dimensional float array.

    Scalars become 1x1 matrices and flat sequences become column vectors.

    Args:
        value (Any): Anything numpy can turn into an array
        name (str): Name used in error messages
        square (bool): Require the matrix to be square

    Returns:
        FloatArray: The validated matrix

    Examples:
        >>> as_matrix(2.0)
        array([[2.]])
        >>> as_matrix([[1, 2], [3, 4]], square=True).shape
        (2, 2)
    """
    matrix = np.array(value, dtype=np.float64)
    if matrix.ndim == 0:
        matrix = matrix.reshape(1, 1)
    elif matrix.ndim == 1:
        matrix = matrix.reshape(-1, 1)
    if matrix.ndim != 2 or 0 in matrix.shape:
        raise DimensionError(f"`{name}` must be a non-empty 2-D matrix, got shape {matrix.shape}")
    if square and matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"`{name}` must be square, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NumericError(f"`{name}` contains NaN or Inf entries", {"shape": matrix.shape})
    return matrix


def as_vector(value: Any, dim: int, name: str = "vector") -> FloatArray:
    """Flat finite float vector of length `dim`"""
    vector = np.asarray(value, dtype=np.float64).reshape(-1)
    if vector.shape != (dim,):
        raise DimensionError(f"`{name}` must have length {dim}, got {vector.size}")
    if not np.all(np.isfinite(vector)):
        raise NumericError(f"`{name}` contains NaN or Inf entries")
    return vector
