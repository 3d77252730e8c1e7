"""The self-consistency condition and its solvers.

Each peer's voting priority must equal their own aggregated share:
p = AGG(W, p). The residuals measure the squared mismatch between the
aggregate and unnormalized share variables y (with p = y / sum y). The
direct iteration re-aggregates with the previous iterate as priorities; for
the additive model the condition is exactly W p = p, so a linear solve gives
the answer outright.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as kernels
from .errors import DimensionMismatch, NonFiniteEntry, NonPositiveEntry, SingularSystem
from .model import (
    ExpertPriorityVector,
    SolveReport,
    SolverConfig,
    WeightMatrix,
    _check_positive_finite,
)


def _square_weights(w) -> np.ndarray:
    if isinstance(w, WeightMatrix):
        values = w.values
    else:
        values = np.ascontiguousarray(w, dtype=float)
        if values.ndim == 2:
            _check_positive_finite(values, "weight matrix")
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise DimensionMismatch("fixed-point solvers need a square weight matrix (peers rating peers)")
    return values


def _share_variables(y, n: int) -> np.ndarray:
    vals = np.ascontiguousarray(getattr(y, "values", y), dtype=float)
    if vals.ndim != 1 or vals.shape[0] != n:
        raise DimensionMismatch(f"share vector must have length {n}")
    if not np.isfinite(vals).all():
        raise NonFiniteEntry("share vector contains a non-finite value")
    if (vals <= 0).any():
        raise NonPositiveEntry("share vector entries must be strictly positive")
    return vals


def residual_g(w, y) -> float:
    """Multiplicative-model residual at share variables y > 0.

    With p = y / sum y: sum_i (prod_q w[i, q]^p_q - y_i)^2.
    """
    values = _square_weights(w)
    return float(kernels.residual_geometric(values, _share_variables(y, values.shape[0])))


def residual_h(w, y) -> float:
    """Additive-model residual at share variables y > 0.

    With p = y / sum y: sum_i ((W p)_i - y_i)^2.
    """
    values = _square_weights(w)
    return float(kernels.residual_arithmetic(values, _share_variables(y, values.shape[0])))


def _simplex(v: np.ndarray) -> np.ndarray:
    if not np.isfinite(v).all():
        raise NonFiniteEntry("aggregation produced a non-finite iterate")
    if (v <= 0).any():
        raise NonPositiveEntry("aggregation produced a non-positive iterate")
    return v / v.sum()


def dia_solve(w, cfg: SolverConfig | None = None) -> SolveReport:
    """Direct iteration: repeatedly aggregate with the previous iterate as priorities.

    Starts from uniform priorities and renormalizes every iterate. Stops when
    consecutive iterates differ by less than ``delta`` in max-norm, or after
    ``gamma`` iterations. The residual (multiplicative or additive, per the
    configured mode) is evaluated at the final normalized iterate;
    ``converged`` is True only when the iterates stabilized *and* that
    residual is at most ``epsilon``. Non-convergence is reported, not raised.
    """
    cfg = cfg or SolverConfig()
    values = _square_weights(w)
    matrix = w if isinstance(w, WeightMatrix) else WeightMatrix(values)
    n = values.shape[0]
    if cfg.aggregation_mode == "gaip":
        agg, res = kernels.weighted_geometric, kernels.residual_geometric
    else:
        agg, res = kernels.weighted_arithmetic, kernels.residual_arithmetic

    current = _simplex(agg(values, np.full(n, 1.0 / n)))
    trace = [current.copy()] if cfg.record_trace else None
    iterations = cfg.gamma
    stabilized = False
    for step in range(1, cfg.gamma + 1):
        nxt = _simplex(agg(values, current))
        if trace is not None:
            trace.append(nxt.copy())
        change = float(np.max(np.abs(nxt - current)))
        current = nxt
        if change < cfg.delta:
            iterations = step
            stabilized = True
            break

    residual = float(res(values, current))
    return SolveReport(
        shares=ExpertPriorityVector(current),
        residual=residual,
        iterations=iterations,
        converged=stabilized and residual <= cfg.epsilon,
        per_expert_weights=matrix,
        trace=tuple(trace) if trace is not None else None,
        solver="dia",
    )


def aaip_exact(w) -> ExpertPriorityVector:
    """Exact additive-model shares: the positive solution of W p = p, sum p = 1.

    Solves (W - I) p = 0 with one equation swapped for the normalization
    constraint, by a direct linear solve plus one refinement step. For a
    strictly positive column-stochastic W the solution is unique and positive.
    """
    values = _square_weights(w)
    if (values <= 0).any():
        raise NonPositiveEntry("exact additive solve needs strictly positive weights")
    n = values.shape[0]
    a = values - np.eye(n)
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        p = np.linalg.solve(a, b)
        p += np.linalg.solve(a, b - a @ p)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"share system could not be solved: {exc}") from None
    if not np.isfinite(p).all() or (p <= 0).any():
        raise SingularSystem("share system is rank-deficient beyond the expected one-dimensional nullspace")
    return ExpertPriorityVector(p / p.sum())
