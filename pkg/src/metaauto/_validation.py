"""Input checks shared by the estimator classes."""
from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array


def check_bit_vector(x, min_len: int = 1, name: str = "X") -> np.ndarray:
    """1-D array of 0/1 values as uint8."""
    arr = np.asarray(x)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_len:
        raise ValueError(f"{name} needs at least {min_len} terms, got {arr.size}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0 and 1")
    return arr.astype(np.uint8)


def check_bit_matrix(x, min_len: int = 1) -> np.ndarray:
    """2-D array, one binary word per row."""
    arr = check_array(x, dtype=None, ensure_min_features=min_len)
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("X must contain only 0 and 1")
    return arr.astype(np.uint8)


def check_index_array(n) -> np.ndarray:
    arr = np.asarray(n)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValueError("indices must be one-dimensional")
    if not np.issubdtype(arr.dtype, np.integer):
        if arr.size and not np.all(np.mod(arr, 1) == 0):
            raise ValueError("indices must be integers")
    arr = arr.astype(np.int64)
    if arr.size and arr.min() < 0:
        raise ValueError("indices must be nonnegative")
    return arr
