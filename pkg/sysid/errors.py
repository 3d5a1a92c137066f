from typing import Any, Iterable

__all__ = [
    "SysIdError",
    "DimensionError",
    "PreconditionError",
    "NumericError",
    "SingularMatrixError",
    "OverflowRiskError",
    "RegimeError",
    "IrregularSystemError",
    "ConfigError",
    "ArtifactIOError",
]


class SysIdError(Exception):
    """Base class of every error raised by sysid"""


class DimensionError(SysIdError, ValueError):
    """Shapes of the supplied matrices do not fit together"""


class PreconditionError(SysIdError, ValueError):
    """An argument lies outside the range where the operation is defined"""


class NumericError(SysIdError, ArithmeticError):
    """
    A numerical routine failed or would produce non-finite values.

    Args:
        message (str): Human readable description
        diagnostics (dict[str, Any], optional): Extra context such as matrix norms or the failing routine
    """

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or {}

    def __str__(self) -> str:
        if not self.diagnostics:
            return super().__str__()
        details = ", ".join(f"{key}={value!r}" for key, value in sorted(self.diagnostics.items()))
        return f"{super().__str__()} ({details})"


class SingularMatrixError(NumericError):
    """A matrix that has to be inverted is singular"""


class OverflowRiskError(NumericError):
    """The requested simulation would leave the double precision range"""


class RegimeError(SysIdError):
    """The system lies outside the spectral regime a bound or experiment is defined for"""


class IrregularSystemError(RegimeError):
    """The system is explosive and irregular, OLS is not consistent for it"""


class ConfigError(SysIdError, ValueError):
    """
    A configuration could not be parsed or failed validation.

    All problems found are collected in `problems` so they can be reported at once.

    Args:
        problems (Iterable[str]): One message per offending field
    """

    def __init__(self, problems: Iterable[str]) -> None:
        self.problems = list(problems)
        super().__init__("; ".join(self.problems) or "invalid configuration")


class ArtifactIOError(SysIdError, OSError):
    """Reading or writing an artifact failed"""
