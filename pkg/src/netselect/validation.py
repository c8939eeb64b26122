"""Input validation helpers shared by the estimators."""

import numpy as np

from .exceptions import DimensionMismatch

TOL = 1e-9


def check_square(matrix, name="matrix"):
    """Return ``matrix`` as a finite 2-D float array with equal sides."""
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty square 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_decision_array(X, n_criteria=None, name="X"):
    """Validate a raw decision matrix: 2-D, finite, nonnegative."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a 2-D array with at least one row and column, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    if np.any(arr < 0):
        raise ValueError(f"{name} contains negative entries; encode cost criteria with a direction flag instead")
    if n_criteria is not None and arr.shape[1] != n_criteria:
        raise DimensionMismatch(f"{name} has {arr.shape[1]} columns but {n_criteria} criteria were given")
    return arr


def check_weights(weights, n=None, name="weights"):
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {w.shape}")
    if n is not None and w.shape[0] != n:
        raise DimensionMismatch(f"{name} has length {w.shape[0]}, expected {n}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValueError(f"{name} must be finite and nonnegative")
    if abs(w.sum() - 1.0) > TOL:
        raise ValueError(f"{name} must sum to 1 (got {w.sum():.12g})")
    return w
