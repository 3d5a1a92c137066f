import numpy as np
from scipy import linalg

from sysid.errors import NumericError
from sysid.utils.types import FloatArray, as_matrix

__all__ = ["pseudo_inverse", "pseudo_inverse_with_spectrum", "default_rel_tol"]


def default_rel_tol() -> float:
    """Machine epsilon of float64, the default relative cutoff"""
    return float(np.finfo(np.float64).eps)


def pseudo_inverse_with_spectrum(M: FloatArray, rel_tol: float | None = None) -> tuple[FloatArray, FloatArray, int]:
    """
    Moore-Penrose pseudo-inverse through a thin SVD, also returning the spectrum

    Singular values below rel_tol * σ_max * max(rows, cols) are treated as zero.

    Args:
        M (FloatArray): Any finite matrix
        rel_tol (float, optional): Relative cutoff, machine epsilon by default

    Returns:
        tuple[FloatArray, FloatArray, int]: M⁺ (cols x rows), the singular values in descending order and the rank
    """
    M = as_matrix(M, name="M")
    rel_tol = default_rel_tol() if rel_tol is None else rel_tol
    try:
        u, s, vh = linalg.svd(M, full_matrices=False)
    except linalg.LinAlgError as error:
        raise NumericError("SVD did not converge", {"shape": M.shape}) from error

    if s.size == 0 or s[0] == 0.0:
        return np.zeros(M.T.shape), s, 0
    cutoff = rel_tol * s[0] * max(M.shape)
    keep = s > cutoff
    inverse = (vh[keep].T / s[keep]) @ u[:, keep].T
    return inverse, s, int(keep.sum())


def pseudo_inverse(M: FloatArray, rel_tol: float | None = None) -> FloatArray:
    """
    Moore-Penrose pseudo-inverse

    Examples:
        >>> pseudo_inverse(np.diag([1.0, 0.0]))
        array([[1., 0.],
               [0., 0.]])
    """
    return pseudo_inverse_with_spectrum(M, rel_tol)[0]
