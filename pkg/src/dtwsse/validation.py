"""Input validation helpers shared by the functional and estimator APIs."""

import numbers

import numpy as np

from .exceptions import DatasetError, NonFiniteError


def as_series(a, name="series"):
    """Return a single time series as a float64 array of shape (L, M).

    A 1-D input is treated as a univariate series of length L.
    """
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(
            f"{name} must be 1-D (L,) or 2-D (L, M), got shape {arr.shape}"
        )
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} is empty (shape {arr.shape})")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite values")
    return arr


def check_series_array(X, name="X"):
    """Validate a batch of equal-shape series.

    Parameters
    ----------
    X : array-like of shape (N, L) or (N, L, M)
        A 2-D input is read as N univariate series.

    Returns
    -------
    ndarray of shape (N, L, M), dtype float64
    """
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3:
        raise DatasetError(
            f"{name} must have shape (N, L) or (N, L, M), got {arr.shape}"
        )
    if arr.shape[0] < 1:
        raise DatasetError(f"{name} contains no samples")
    if arr.shape[1] < 1 or arr.shape[2] < 1:
        raise DatasetError(f"{name} has an empty series axis: {arr.shape}")
    bad = ~np.isfinite(arr).reshape(arr.shape[0], -1).all(axis=1)
    if bad.any():
        raise NonFiniteError(
            f"{name}: sample {int(np.flatnonzero(bad)[0])} contains non-finite values"
        )
    return arr


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_positive_real(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {value!r}")
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be finite and > 0, got {value}")
    return value


def check_seed(seed):
    """Accept None or an unsigned 64-bit integer seed."""
    if seed is None:
        return None
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral):
        raise TypeError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
    return int(seed)
