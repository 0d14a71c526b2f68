"""Input validation helpers shared by the metric functions and estimators."""
from __future__ import annotations

import math
from typing import Any

import numpy as np

POOLING_MODES = ("max", "mean")


def check_pooling(value: str) -> str:
    if value not in POOLING_MODES:
        raise ValueError(f"pooling must be one of {POOLING_MODES}, got {value!r}")
    return value


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be positive and finite, got {value}")
    return value


def check_vector_set(X: Any, name: str = "X") -> np.ndarray:
    """Coerce snippet vectors to a 2-D float64 array of finite values.

    Accepts a ``SnippetSet`` (anything with a ``vectors`` attribute), a 2-D
    array-like, or a sequence of equal-length vectors.
    """
    vectors = getattr(X, "vectors", X)
    arr = np.asarray(vectors, dtype=np.float64)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array of vectors, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr
