"""JSON encoding of complex vectors and matrices.

Complex entries are written as two-element [re, im] lists.  On input,
bare numbers are also accepted and read as real entries, so a real
matrix may be given either as [[1, 0], [0, 1]] or in full pair form
[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]; the nesting depth disambiguates.
"""

from __future__ import annotations

import numpy as np


def complex_to_pairs(array):
    """Encode a complex vector or matrix as nested [re, im] pairs."""
    a = np.asarray(array, dtype=complex)
    if a.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in a]
    if a.ndim == 2:
        return [[[float(z.real), float(z.imag)] for z in row] for row in a]
    raise ValueError(f"unsupported ndim {a.ndim}")


def _entry(obj):
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2 \
            and all(isinstance(x, (int, float)) for x in obj):
        return complex(obj[0], obj[1])
    raise ValueError(f"expected number or [re, im] pair, got {obj!r}")


def pairs_to_vector(obj):
    """Decode a JSON vector of numbers or [re, im] pairs to complex 1-D array."""
    if not isinstance(obj, (list, tuple)):
        raise ValueError("expected a list")
    return np.array([_entry(x) for x in obj], dtype=complex)


def pairs_to_matrix(obj):
    """Decode a JSON matrix of numbers or [re, im] pairs to complex 2-D array."""
    if not isinstance(obj, (list, tuple)) or not obj:
        raise ValueError("expected a non-empty list of rows")
    rows = [pairs_to_vector(row) for row in obj]
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix rows")
    return np.array(rows, dtype=complex)


def jsonable(obj):
    """Recursively convert numpy scalars/arrays to plain JSON-ready values."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return complex_to_pairs(obj)
        return obj.tolist()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj
