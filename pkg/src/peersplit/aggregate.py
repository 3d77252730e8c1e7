"""Weighted aggregation of expert weight columns.

Two operators: a weighted geometric mean (multiplicative model) and a
weighted arithmetic mean (additive model). Expert priorities act as the
weights. The geometric operator works in the log domain so tiny weights at
larger panel sizes do not underflow, and it intentionally returns the raw
products: the multiplicative residual compares them against unnormalized
share variables, so normalization is the caller's move.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as kernels
from .errors import DimensionMismatch, NonFiniteEntry, NonPositiveEntry
from .model import ExpertPriorityVector, WeightMatrix


def _weights_array(w) -> np.ndarray:
    if isinstance(w, WeightMatrix):
        return w.values
    arr = np.ascontiguousarray(w, dtype=float)
    if arr.ndim != 2:
        raise DimensionMismatch("weight matrix must be two-dimensional")
    return arr


def _priority_array(p, k: int) -> np.ndarray:
    vals = p.values if isinstance(p, ExpertPriorityVector) else np.ascontiguousarray(p, dtype=float)
    if vals.ndim != 1 or vals.shape[0] != k:
        raise DimensionMismatch(f"priority vector has {vals.size} entries but there are {k} expert columns")
    return vals


def gaip(w, p) -> np.ndarray:
    """Weighted geometric mean across expert columns; raw, not normalized.

    out[i] = prod_q w[i, q] ** p[q].
    """
    arr = _weights_array(w)
    return kernels.weighted_geometric(arr, _priority_array(p, arr.shape[1]))


def aaip(w, p) -> np.ndarray:
    """Weighted arithmetic mean across expert columns, i.e. w @ p.

    Sums to 1 automatically when all columns are normalized.
    """
    arr = _weights_array(w)
    return kernels.weighted_arithmetic(arr, _priority_array(p, arr.shape[1]))


def normalize(v) -> ExpertPriorityVector:
    """Scale a positive vector to sum 1."""
    vals = np.ascontiguousarray(getattr(v, "values", v), dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise DimensionMismatch("can only normalize a non-empty one-dimensional vector")
    if not np.isfinite(vals).all():
        raise NonFiniteEntry("cannot normalize a vector with non-finite entries")
    if (vals <= 0).any():
        raise NonPositiveEntry("cannot normalize a vector with non-positive entries")
    return ExpertPriorityVector(vals / vals.sum())
