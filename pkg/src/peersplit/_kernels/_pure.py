"""Pure-Python kernel mirror.

Every function here performs the same floating-point operations in the same
order as the compiled `_core` extension, so results agree bit for bit. Keep
the two files in sync: loops stay naive on purpose (no numpy reductions,
which reorder additions).
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "pure"


def weighted_geometric(w: np.ndarray, p: np.ndarray) -> np.ndarray:
    """out[i] = prod_q w[i, q] ** p[q], computed in the log domain."""
    n, k = w.shape
    rows = w.tolist()
    pv = p.tolist()
    out = np.empty(n)
    for i in range(n):
        row = rows[i]
        acc = 0.0
        for q in range(k):
            acc += pv[q] * math.log(row[q])
        out[i] = math.exp(acc)
    return out


def weighted_arithmetic(w: np.ndarray, p: np.ndarray) -> np.ndarray:
    """out[i] = sum_q w[i, q] * p[q]."""
    n, k = w.shape
    rows = w.tolist()
    pv = p.tolist()
    out = np.empty(n)
    for i in range(n):
        row = rows[i]
        acc = 0.0
        for q in range(k):
            acc += row[q] * pv[q]
        out[i] = acc
    return out


def _residual_geometric(rows: list, y: list, n: int) -> float:
    s = 0.0
    for q in range(n):
        s += y[q]
    p = [y[q] / s for q in range(n)]
    total = 0.0
    for i in range(n):
        row = rows[i]
        acc = 0.0
        for q in range(n):
            acc += p[q] * math.log(row[q])
        d = math.exp(acc) - y[i]
        total += d * d
    return total


def _residual_arithmetic(rows: list, y: list, n: int) -> float:
    s = 0.0
    for q in range(n):
        s += y[q]
    p = [y[q] / s for q in range(n)]
    total = 0.0
    for i in range(n):
        row = rows[i]
        acc = 0.0
        for q in range(n):
            acc += row[q] * p[q]
        d = acc - y[i]
        total += d * d
    return total


def residual_geometric(w: np.ndarray, y: np.ndarray) -> float:
    """Sum of squared gaps between weighted geometric means and y."""
    return _residual_geometric(w.tolist(), y.tolist(), w.shape[0])


def residual_arithmetic(w: np.ndarray, y: np.ndarray) -> float:
    """Sum of squared gaps between weighted arithmetic means and y."""
    return _residual_arithmetic(w.tolist(), y.tolist(), w.shape[0])


def objective_geometric(w: np.ndarray, z: np.ndarray) -> float:
    """residual_geometric evaluated at y = exp(z), componentwise."""
    n = w.shape[0]
    zv = z.tolist()
    y = [math.exp(zv[q]) for q in range(n)]
    return _residual_geometric(w.tolist(), y, n)


def objective_arithmetic(w: np.ndarray, z: np.ndarray) -> float:
    """residual_arithmetic evaluated at y = exp(z), componentwise."""
    n = w.shape[0]
    zv = z.tolist()
    y = [math.exp(zv[q]) for q in range(n)]
    return _residual_arithmetic(w.tolist(), y, n)
