import hashlib
import io
import logging
import os
import tempfile
from pathlib import Path

import numpy as np

from sysid.errors import ArtifactIOError, DimensionError, NumericError
from sysid.utils.types import ComplexArray, FilePath, FloatArray, as_matrix

logger = logging.getLogger(__name__)


def atomic_write(path: FilePath, content: str | bytes) -> Path:
    """
    Write `content` to `path` through a temporary file in the same directory followed by a rename

    Readers never observe a half written file. Parent directories are created as needed.

    Args:
        path (FilePath): Target file
        content (str | bytes): Text is written as UTF-8

    Returns:
        The resolved target path
    """
    target = Path(path)
    data = content.encode() if isinstance(content, str) else content
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, temp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(temp_name, target)
        except BaseException:
            Path(temp_name).unlink(missing_ok=True)
            raise
    except OSError as error:
        raise ArtifactIOError(f"Could not write `{target}`: {error}") from error
    logger.debug("wrote %s (%d bytes)", target, len(data))
    return target


def read_text(path: FilePath) -> str:
    """Read a UTF-8 text file, wrapping I/O failures with the path"""
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise ArtifactIOError(f"Could not read `{path}`: {error}") from error


def file_digest(path: FilePath) -> str:
    """sha256 hex digest of a file's bytes"""
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError as error:
        raise ArtifactIOError(f"Could not read `{path}`: {error}") from error


def format_csv(matrix: FloatArray, header: str | None = None) -> str:
    """
    Render a real matrix as CSV text, one row per matrix row

    Numbers use `%.17g` so values survive a round trip and never depend on the locale.
    """
    buffer = io.StringIO()
    np.savetxt(buffer, np.atleast_2d(matrix), delimiter=",", fmt="%.17g", header=header or "", comments="")
    return buffer.getvalue()


def write_matrix_csv(path: FilePath, matrix: FloatArray) -> Path:
    """Write a real matrix as CSV"""
    return atomic_write(path, format_csv(as_matrix(matrix)))


def read_matrix_csv(path: FilePath, skip_header: bool = False) -> FloatArray:
    """
    Read a real matrix written by `write_matrix_csv`

    Args:
        path (FilePath): CSV file
        skip_header (bool): Ignore the first line (trajectory files carry a header)

    Returns:
        FloatArray: The matrix, at least 2-D
    """
    text = read_text(path)
    try:
        matrix = np.loadtxt(io.StringIO(text), delimiter=",", ndmin=2, skiprows=1 if skip_header else 0)
    except ValueError as error:
        raise NumericError(f"`{path}` is not a numeric CSV matrix: {error}") from error
    return as_matrix(matrix, name=str(path))


def complex_csv_paths(path: FilePath) -> tuple[Path, Path]:
    """`<stem>.re.csv` and `<stem>.im.csv` next to `path`"""
    base = Path(path)
    stem = base.name.removesuffix(".csv")
    return base.with_name(f"{stem}.re.csv"), base.with_name(f"{stem}.im.csv")


def write_complex_csv(path: FilePath, matrix: ComplexArray) -> tuple[Path, Path]:
    """
    Write a complex matrix as two real CSV files holding the real and imaginary parts

    Args:
        path (FilePath): Base name, `x.csv` becomes `x.re.csv` and `x.im.csv`
        matrix (ComplexArray): 2-D complex matrix

    Returns:
        tuple[Path, Path]: The real part file and the imaginary part file
    """
    values = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
    real_path, imag_path = complex_csv_paths(path)
    return write_matrix_csv(real_path, values.real), write_matrix_csv(imag_path, values.imag)


def read_complex_csv(path: FilePath) -> ComplexArray:
    """Read a complex matrix written by `write_complex_csv`"""
    real_path, imag_path = complex_csv_paths(path)
    real, imag = read_matrix_csv(real_path), read_matrix_csv(imag_path)
    if real.shape != imag.shape:
        raise DimensionError(f"`{real_path}` is {real.shape} but `{imag_path}` is {imag.shape}")
    return np.asarray(real + 1j * imag, dtype=np.complex128)
