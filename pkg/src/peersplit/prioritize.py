"""Weight derivation from a single comparison table, plus consistency checks.

Three derivation routes: the principal eigenvector (power iteration), row
geometric means, and logarithmic least squares. The last one also handles
incomplete tables as long as the comparison graph is connected; on complete
tables it coincides with the geometric-mean route.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DisconnectedGraph, IncompleteMatrix, NoConvergence
from .model import PCMatrix, WeightVector, comparison_graph_connected

POWER_TOL = 1e-12
POWER_MAX_ITER = 10000

#: Saaty's random consistency index, used for CR = CI / RI.
RANDOM_INDEX = {
    3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45,
    10: 1.49, 11: 1.51, 12: 1.48, 13: 1.56, 14: 1.57, 15: 1.59,
}


def _require_complete(m: PCMatrix, op: str):
    if not m.is_complete:
        raise IncompleteMatrix(f"{op} needs a complete comparison table; use llsm for incomplete ones",
                               expert=m.expert_id or None)


def principal_eigenvector(m: PCMatrix) -> tuple[WeightVector, float]:
    """Dominant eigenvector (sum-1 normalized) and eigenvalue, by power iteration.

    Positive comparison tables have a simple dominant eigenvalue, so the
    iteration from a uniform start converges geometrically.
    """
    _require_complete(m, "eigenvector derivation")
    c = m.entries
    n = m.n
    w = np.full(n, 1.0 / n)
    for _ in range(POWER_MAX_ITER):
        nxt = c @ w
        nxt /= nxt.sum()
        change = float(np.max(np.abs(nxt - w)))
        w = nxt
        if change <= POWER_TOL:
            break
    else:
        raise NoConvergence(
            f"power iteration did not reach {POWER_TOL:g} within {POWER_MAX_ITER} iterations",
            expert=m.expert_id or None,
        )
    lam = float((c @ w).sum())
    return WeightVector(w), lam


def derive_evm(m: PCMatrix) -> WeightVector:
    """Weights as the normalized principal eigenvector."""
    return principal_eigenvector(m)[0]


def derive_gmm(m: PCMatrix) -> WeightVector:
    """Weights proportional to the geometric means of the table rows."""
    _require_complete(m, "geometric-mean derivation")
    w = np.exp(np.log(m.entries).mean(axis=1))
    return WeightVector(w / w.sum())


def derive_llsm(m: PCMatrix) -> WeightVector:
    """Weights from the logarithmic least-squares problem.

    Minimizes sum over provided pairs of (ln c_ij - x_i + x_j)^2 via the
    normal equations: a graph-Laplacian system with x_1 fixed to 0 as gauge
    (any gauge yields the same normalized weights). Requires a connected
    comparison graph.
    """
    if not comparison_graph_connected(m):
        raise DisconnectedGraph("comparison graph is not connected; weights are underdetermined",
                                expert=m.expert_id or None)
    n, entries = m.n, m.entries
    laplacian = np.zeros((n, n))
    rhs = np.zeros(n)
    for i in range(n):
        for j in range(n):
            if i == j or math.isnan(entries[i, j]):
                continue
            lc = math.log(entries[i, j])
            laplacian[i, i] += 1.0
            laplacian[i, j] -= 1.0
            rhs[i] += lc
            laplacian[j, j] += 1.0
            laplacian[j, i] -= 1.0
            rhs[j] -= lc
    x = np.zeros(n)
    x[1:] = np.linalg.solve(laplacian[1:, 1:], rhs[1:])
    w = np.exp(x - x.max())
    return WeightVector(w / w.sum())


def consistency_index(m: PCMatrix) -> tuple[float, float | None]:
    """Saaty consistency index CI and ratio CR (None when no RI is tabulated).

    CI = (lambda_max - n) / (n - 1); reported as a diagnostic only, never
    used to reject input.
    """
    _require_complete(m, "consistency index")
    _, lam = principal_eigenvector(m)
    n = m.n
    ci = (lam - n) / (n - 1)
    ri = RANDOM_INDEX.get(n)
    cr = ci / ri if ri else None
    return ci, cr


_DERIVERS = {"evm": derive_evm, "gmm": derive_gmm, "llsm": derive_llsm}


def derive(m: PCMatrix, method: str) -> WeightVector:
    """Dispatch to one of the derivation routes by name."""
    try:
        fn = _DERIVERS[method]
    except KeyError:
        raise ValueError(f"unknown derivation method {method!r}") from None
    return fn(m)
