"""JSON wire formats.

A matrix is ``{"rows": m, "cols": k, "entries": [[re, im], ...]}`` with the
``m * k`` entries in row-major order.  NaN and infinities are rejected.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import MatrixFormatError


def _reject_constant(name):
    raise MatrixFormatError(f"non-finite number {name} is not allowed")


def loads(text: str):
    """``json.loads`` that refuses ``NaN``/``Infinity`` literals."""
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, allow_nan=False, separators=(",", ":"), sort_keys=True)


def complex_to_json(z) -> list:
    z = complex(z)
    # normalise -0.0 so output is byte-stable
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def complex_from_json(pair) -> complex:
    if isinstance(pair, (int, float)) and not isinstance(pair, bool):
        value = complex(pair)
    elif isinstance(pair, (list, tuple)) and len(pair) == 2 and all(
        isinstance(p, (int, float)) and not isinstance(p, bool) for p in pair
    ):
        value = complex(pair[0], pair[1])
    else:
        raise MatrixFormatError(f"expected [re, im], got {pair!r}")
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise MatrixFormatError("non-finite entry")
    return value


def matrix_to_json(A) -> dict:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise MatrixFormatError(f"expected a 2-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise MatrixFormatError("matrix has non-finite entries")
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "entries": [complex_to_json(z) for z in A.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise MatrixFormatError("matrix JSON must be an object")
    try:
        rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
    except KeyError as exc:
        raise MatrixFormatError(f"matrix JSON is missing key {exc}") from None
    if not all(isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in (rows, cols)):
        raise MatrixFormatError("rows and cols must be positive integers")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise MatrixFormatError(f"expected {rows * cols} entries, got {len(entries) if isinstance(entries, list) else entries!r}")
    values = [complex_from_json(e) for e in entries]
    return np.array(values, dtype=complex).reshape(rows, cols)


def parse_matrix(text: str) -> np.ndarray:
    return matrix_from_json(loads(text))
