"""JSON interchange.

Matrices::

    {"rows": n, "cols": m, "data": [[re, im], ...]}     # row-major, n*m pairs

Conjugations use the same schema under ``"s"`` together with
``"kind": "conjugation"``.  Complex scalars inside parameter files may be
written either as a bare number or as a ``[re, im]`` pair.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .core import Conjugation, Tolerance, as_matrix, validate_conjugation
from .errors import InvalidMatrix, InvalidParams


def complex_to_json(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def complex_from_json(obj) -> complex:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj
    ):
        return complex(obj[0], obj[1])
    if isinstance(obj, dict) and set(obj) == {"re", "im"}:
        return complex(obj["re"], obj["im"])
    raise InvalidParams(f"cannot read {obj!r} as a complex number")


def vector_from_json(obj) -> np.ndarray:
    if not isinstance(obj, (list, tuple)):
        raise InvalidParams(f"expected a list of complex numbers, got {obj!r}")
    return np.array([complex_from_json(v) for v in obj], dtype=np.complex128)


def vector_to_json(v) -> list:
    return [complex_to_json(z) for z in np.asarray(v).ravel()]


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise InvalidMatrix(f"expected a 2-D array, got shape {a.shape}")
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [complex_to_json(z) for z in a.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or not {"rows", "cols", "data"} <= set(obj):
        raise InvalidMatrix("matrix JSON needs 'rows', 'cols' and 'data'")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 0 or cols < 0:
        raise InvalidMatrix(f"bad dimensions rows={rows!r} cols={cols!r}")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise InvalidMatrix(f"'data' must hold rows*cols = {rows * cols} entries")
    try:
        flat = np.array([complex_from_json(z) for z in data], dtype=np.complex128)
    except InvalidParams as exc:
        raise InvalidMatrix(str(exc)) from exc
    return as_matrix(flat.reshape(rows, cols))


def conjugation_to_json(c: Conjugation) -> dict:
    return {"kind": "conjugation", "s": matrix_to_json(c.s)}


def conjugation_from_json(obj, tol: Tolerance | None = None) -> Conjugation:
    if not isinstance(obj, dict) or obj.get("kind") != "conjugation" or "s" not in obj:
        raise InvalidMatrix("conjugation JSON needs kind='conjugation' and 's'")
    return validate_conjugation(matrix_from_json(obj["s"]), tol)


def dumps(obj) -> str:
    """Canonical serialization: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidMatrix(f"{path}: not valid JSON ({exc})") from exc


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(read_json(path))


def save_matrix(path, a) -> None:
    write_json(path, matrix_to_json(a))


def load_conjugation(path, tol: Tolerance | None = None) -> Conjugation:
    return conjugation_from_json(read_json(path), tol)


def save_conjugation(path, c: Conjugation) -> None:
    write_json(path, conjugation_to_json(c))


def matrix_digest(a) -> str:
    """SHA-256 of the canonical JSON form of ``a``."""
    payload = json.dumps(matrix_to_json(a), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(payload.encode()).hexdigest()
