"""Scalar modes and the small amount of numeric plumbing shared by all modules.

Two modes exist.  ``"rational"`` stores Python ints / :class:`fractions.Fraction`
in numpy ``object`` arrays and every operation is exact.  ``"float64"`` stores
plain ``float64`` arrays.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Literal

import numpy as np

from .errors import ModeMismatch, UnsupportedMode

Mode = Literal["rational", "float64"]
RATIONAL: Mode = "rational"
FLOAT64: Mode = "float64"
MODES = (RATIONAL, FLOAT64)


def check_mode(mode: str) -> Mode:
    if mode not in MODES:
        raise UnsupportedMode(f"unknown scalar mode {mode!r}")
    return mode  # type: ignore[return-value]


def same_mode(*modes: str) -> Mode:
    first = modes[0]
    for m in modes[1:]:
        if m != first:
            raise ModeMismatch(f"mixed scalar modes {first!r} and {m!r}")
    return check_mode(first)


def to_rational(value) -> Fraction | int:
    """Exact conversion; strings may be ``"p/q"`` or integers.  Floats are rejected
    unless they are integral, so binary rounding never leaks into exact data."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        return to_rational(Fraction(value.strip()))
    if isinstance(value, (float, np.floating)):
        if float(value).is_integer():
            return int(value)
        raise ModeMismatch(f"float {value!r} given in rational mode")
    if isinstance(value, np.integer):
        return int(value)
    # gmpy2.mpq and friends
    return to_rational(Fraction(int(value.numerator), int(value.denominator)))


def to_scalar(value, mode: Mode):
    if mode == RATIONAL:
        return to_rational(value)
    if isinstance(value, str):
        return float(Fraction(value.strip())) if "/" in value else float(value)
    return float(value)


def as_matrix(rows, mode: Mode) -> np.ndarray:
    """2D array in the storage dtype of ``mode``."""
    if mode == FLOAT64:
        arr = np.array(rows, dtype=np.float64)
    elif isinstance(rows, np.ndarray) and rows.dtype.kind in "iu":
        arr = rows.astype(object)
    elif (
        isinstance(rows, np.ndarray)
        and rows.dtype == object
        and rows.ndim == 2
        and all(type(v) is int or type(v) is Fraction for v in rows.flat)
    ):
        arr = rows
    else:
        src = np.asarray(rows, dtype=object)
        arr = np.empty(src.shape, dtype=object)
        for idx, v in np.ndenumerate(src):
            arr[idx] = to_rational(v)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {arr.shape}")
    return arr


def as_vector(values, mode: Mode) -> np.ndarray:
    if mode == FLOAT64:
        arr = np.array(values, dtype=np.float64)
    else:
        vals = list(values)
        arr = np.empty(len(vals), dtype=object)
        for i, v in enumerate(vals):
            arr[i] = to_rational(v)
    if arr.ndim != 1:
        raise ValueError(f"expected a vector, got shape {arr.shape}")
    return arr


def zeros(shape, mode: Mode) -> np.ndarray:
    if mode == FLOAT64:
        return np.zeros(shape, dtype=np.float64)
    arr = np.empty(shape, dtype=object)
    arr.fill(0)
    return arr


def infer_mode(arr: np.ndarray) -> Mode:
    return RATIONAL if arr.dtype == object else FLOAT64


def max_abs(arr: np.ndarray):
    """Largest absolute entry (the entrywise infinity norm); 0 for empty input."""
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(v) for v in arr.flat)
    return float(np.max(np.abs(arr)))


def format_scalar(value, mode: Mode) -> str:
    if mode == RATIONAL:
        return str(Fraction(value))
    return repr(float(value))


def json_scalar(value, mode: Mode):
    """JSON encoding: rationals become ``"p/q"`` strings, floats stay numbers."""
    if mode == RATIONAL:
        return str(Fraction(value))
    return float(value)


def rational_sqrt(q) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if it is irrational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    p, d = q.numerator, q.denominator
    rp, rd = isqrt(p), isqrt(d)
    if rp * rp == p and rd * rd == d:
        return Fraction(rp, rd)
    return None


def floor_sqrt(q) -> int:
    """floor(sqrt(q)) for a nonnegative rational q, exactly."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    return isqrt(q.numerator // q.denominator)


def round_sqrt(q) -> int:
    """Nearest integer to sqrt(q); exact halves round toward zero."""
    q = Fraction(q)
    f = floor_sqrt(q)
    half = Fraction(2 * f + 1, 2)
    return f + 1 if q > half * half else f
