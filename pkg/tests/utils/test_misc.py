import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest

from sysid.errors import ArtifactIOError, DimensionError, NumericError
from sysid.utils.file import (
    atomic_write,
    file_digest,
    read_complex_csv,
    read_matrix_csv,
    write_complex_csv,
    write_matrix_csv,
)
from sysid.utils.misc import canonical_json, content_hash, to_jsonable
from sysid.utils.types import RegimeClass


@dataclass(frozen=True)
class _Point:
    x: float
    tag: RegimeClass


def test_to_jsonable() -> None:
    value = {"point": _Point(math.nan, RegimeClass.STABLE), "z": complex(1, -2), "set": {2, 1}, "n": np.int64(3)}
    assert to_jsonable(value) == {"point": {"x": "nan", "tag": "S0"}, "z": [1.0, -2.0], "set": [1, 2], "n": 3}


def test_canonical_json_sorts_keys() -> None:
    assert canonical_json({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'
    assert content_hash({"b": 1, "a": 2}) == content_hash({"a": 2, "b": 1})


def test_atomic_write_creates_directories(tmp_path: Path) -> None:
    path = atomic_write(tmp_path / "nested" / "file.txt", "hello")
    assert path.read_text(encoding="utf-8") == "hello"
    assert list(path.parent.iterdir()) == [path]
    assert file_digest(path) == "2cf24dba5fb0a30e26e83b2ac5b9e29e1b161e5c1fa7425e73043362938b9824"


def test_matrix_csv_round_trip(tmp_path: Path) -> None:
    matrix = np.array([[0.1, 1e-300], [-2.5, 3.0]])
    np.testing.assert_array_equal(read_matrix_csv(write_matrix_csv(tmp_path / "m.csv", matrix)), matrix)


def test_read_errors(tmp_path: Path) -> None:
    with pytest.raises(ArtifactIOError):
        read_matrix_csv(tmp_path / "missing.csv")
    (tmp_path / "bad.csv").write_text("a,b\n", encoding="utf-8")
    with pytest.raises(NumericError):
        read_matrix_csv(tmp_path / "bad.csv")


def test_complex_matrix_is_split_into_parts(tmp_path: Path) -> None:
    matrix = np.array([[1 + 2j, 0.5], [0, -1j]])
    real_path, imag_path = write_complex_csv(tmp_path / "lam.csv", matrix)
    assert (real_path.name, imag_path.name) == ("lam.re.csv", "lam.im.csv")
    np.testing.assert_array_equal(read_matrix_csv(imag_path), matrix.imag)
    np.testing.assert_array_equal(read_complex_csv(tmp_path / "lam.csv"), matrix)


def test_complex_parts_must_agree(tmp_path: Path) -> None:
    write_matrix_csv(tmp_path / "lam.re.csv", np.eye(2))
    write_matrix_csv(tmp_path / "lam.im.csv", np.eye(3))
    with pytest.raises(DimensionError):
        read_complex_csv(tmp_path / "lam.csv")
