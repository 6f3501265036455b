"""Input validation helpers."""
from __future__ import annotations

import numbers

import numpy as np

from ._errors import InvalidArgumentError


def check_order(d, name="order", minimum=1):
    """Return ``d`` as int, rejecting non-integers and values below ``minimum``."""
    if isinstance(d, bool) or not isinstance(d, numbers.Integral):
        raise InvalidArgumentError(f"{name} must be an integer, got {d!r}")
    if d < minimum:
        raise InvalidArgumentError(f"{name} must be >= {minimum}, got {d}")
    return int(d)


def check_series(x, min_length=1, name="series"):
    """Convert ``x`` to a 1-D float array of finite values.

    Parameters
    ----------
    x : array-like
        Candidate series.
    min_length : int
        Minimum number of entries.
    name : str
        Used in error messages.

    Returns
    -------
    numpy.ndarray
        Integer arrays are returned unchanged so that large exact values
        (orbit numerators) are compared without rounding.
    """
    arr = np.asarray(x)
    if arr.dtype.kind in "iu":
        arr = arr.astype(np.int64, copy=False)
        if arr.ndim != 1:
            raise InvalidArgumentError(f"{name} must be one-dimensional, got shape {arr.shape}")
        if len(arr) < min_length:
            raise InvalidArgumentError(
                f"{name} has length {len(arr)}, need at least {min_length}")
        return arr
    try:
        arr = np.asarray(x, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"{name} must contain real numbers") from exc
    if arr.ndim != 1:
        raise InvalidArgumentError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if len(arr) < min_length:
        raise InvalidArgumentError(
            f"{name} has length {len(arr)}, need at least {min_length}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} contains non-finite values")
    return arr


def check_table(values, name="table"):
    """Validate an observation table of shape ``(n, d + 1)`` or a stack of them."""
    arr = np.asarray(values)
    if arr.dtype == object:
        # exact rationals stay exact; comparisons on object arrays are elementwise
        if not all(isinstance(v, numbers.Rational) for v in arr.flat):
            raise InvalidArgumentError(f"{name} must contain real numbers")
    elif arr.dtype.kind in "iu":
        arr = arr.astype(np.int64, copy=False)
    else:
        try:
            arr = arr.astype(float)
        except (TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"{name} must contain real numbers") from exc
        if not np.all(np.isfinite(arr)):
            raise InvalidArgumentError(f"{name} contains non-finite values")
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim not in (2, 3):
        raise InvalidArgumentError(f"{name} must be 2-D (observables x times), got {arr.shape}")
    if arr.shape[-2] < 1 or arr.shape[-1] < 2:
        raise InvalidArgumentError(f"{name} needs n >= 1 observables and d >= 1, got {arr.shape}")
    return arr
