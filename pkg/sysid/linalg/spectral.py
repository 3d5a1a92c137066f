from dataclasses import dataclass

import numpy as np
from scipy import linalg

from sysid.errors import NumericError, PreconditionError
from sysid.utils.types import ComplexArray, FloatArray, RegimeClass, as_matrix

__all__ = ["SpectralReport", "classify_modulus", "eigenvalues", "is_regular", "spectral_report"]


@dataclass(frozen=True)
class SpectralReport:
    """
    Eigenvalue moduli of A and their regime classes relative to a horizon T

    Attributes:
        moduli (tuple[float, ...]): ρ₁ >= ... >= ρ_d
        per_eigenvalue_class (tuple[RegimeClass, ...]): Class of each modulus, same order
        overall (frozenset[RegimeClass]): Classes present
        regular (bool): Every eigenvalue of modulus > 1 has geometric multiplicity one
        horizon_T (int): Horizon the classes refer to
        boundary_C (float): Width constant of the marginal band
    """

    moduli: tuple[float, ...]
    per_eigenvalue_class: tuple[RegimeClass, ...]
    overall: frozenset[RegimeClass]
    regular: bool
    horizon_T: int
    boundary_C: float

    @property
    def is_pure(self) -> bool:
        """Only one class is present"""
        return len(self.overall) == 1

    @property
    def rho_max(self) -> float:
        return self.moduli[0]

    @property
    def rho_min(self) -> float:
        return self.moduli[-1]


def classify_modulus(rho: float, T: int, C: float = 1.0) -> RegimeClass:
    """
    Regime class of one eigenvalue modulus

    ρ <= 1 - C/T is stable, 1 - C/T < ρ <= 1 + C/T is marginal and anything larger is explosive.

    Examples:
        >>> classify_modulus(0.5, 100).value
        'S0'
        >>> classify_modulus(1.0, 100).value
        'S1'
    """
    if T < 1 or C <= 0:
        raise PreconditionError(f"Need T >= 1 and C > 0, got T={T}, C={C}")
    if rho <= 1.0 - C / T:
        return RegimeClass.STABLE
    if rho <= 1.0 + C / T:
        return RegimeClass.MARGINAL
    return RegimeClass.EXPLOSIVE


def eigenvalues(A: FloatArray) -> ComplexArray:
    """Eigenvalues of A, wrapping solver failures in a NumericError"""
    A = as_matrix(A, name="A", square=True)
    try:
        return np.asarray(linalg.eigvals(A), dtype=np.complex128)
    except linalg.LinAlgError as error:
        raise NumericError(
            "Eigenvalue solver failed", {"dim": A.shape[0], "norm": float(np.linalg.norm(A, 2))}
        ) from error


def _default_tol(A: FloatArray) -> float:
    return 1e-8 * max(float(np.linalg.norm(A, 2)), 1.0)


def is_regular(A: FloatArray, tol: float | None = None) -> bool:
    """
    True when rank(A - λI) = d - 1 for every eigenvalue λ with |λ| > 1 + tol

    Args:
        A (FloatArray): Square matrix
        tol (float, optional): Rank and modulus tolerance, 1e-8 * ‖A‖ by default
    """
    A = as_matrix(A, name="A", square=True)
    tol = _default_tol(A) if tol is None else tol
    d = A.shape[0]
    for eigenvalue in eigenvalues(A):
        if abs(eigenvalue) <= 1.0 + tol:
            continue
        shifted = A.astype(np.complex128) - eigenvalue * np.eye(d)
        if np.linalg.matrix_rank(shifted, tol=tol) != d - 1:
            return False
    return True


def spectral_report(A: FloatArray, T: int, C: float = 1.0, tol: float | None = None) -> SpectralReport:
    """
    Moduli, regime classes and regularity of A

    Args:
        A (FloatArray): Square matrix
        T (int): Horizon
        C (float): Width constant of the marginal band
        tol (float, optional): Regularity tolerance, see `is_regular`

    Returns:
        SpectralReport: The report

    Examples:
        >>> report = spectral_report(1.1 * np.eye(2), T=1000)
        >>> sorted(c.value for c in report.overall), report.regular
        (['S2'], False)
    """
    A = as_matrix(A, name="A", square=True)
    moduli = tuple(float(value) for value in np.sort(np.abs(eigenvalues(A)))[::-1])
    classes = tuple(classify_modulus(rho, T, C) for rho in moduli)
    return SpectralReport(
        moduli=moduli,
        per_eigenvalue_class=classes,
        overall=frozenset(classes),
        regular=is_regular(A, tol),
        horizon_T=T,
        boundary_C=C,
    )
