import dataclasses
import hashlib
import json
import math
from enum import Enum
from typing import Any

import numpy as np

JSONPrimitive = str | int | float | bool | None
JSONValue = JSONPrimitive | dict[str, "JSONValue"] | list["JSONValue"]
JSONObject = dict[str, JSONValue]


def to_jsonable(value: Any) -> JSONValue:
    """
    Convert numpy arrays, dataclasses, enums and nested containers into plain JSON values.

    Non-finite floats become strings ("inf", "-inf", "nan") so the output stays strict JSON.
    Complex numbers are written as `[re, im]`.

    Examples:
        >>> to_jsonable(np.eye(2))
        [[1.0, 0.0], [0.0, 1.0]]
        >>> to_jsonable(float("inf"))
        'inf'
    """
    if isinstance(value, Enum):
        return to_jsonable(value.value)
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {field.name: to_jsonable(getattr(value, field.name)) for field in dataclasses.fields(value)}
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.floating, float)):
        number = float(value)
        return number if math.isfinite(number) else str(number)
    if isinstance(value, (np.integer, int)) and not isinstance(value, bool):
        return int(value)
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=str) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(item) for item in items]
    if value is None or isinstance(value, str):
        return value
    return str(value)


def canonical_json(value: Any) -> str:
    """Deterministic JSON text: sorted keys, two space indent, trailing newline"""
    return json.dumps(to_jsonable(value), sort_keys=True, indent=2, allow_nan=False) + "\n"


def content_hash(value: Any) -> str:
    """sha256 of the canonical JSON form of `value`"""
    return hashlib.sha256(canonical_json(value).encode()).hexdigest()
