"""Domain types: comparison tables, weight vectors, solver configuration.

All types are immutable after construction (arrays are frozen), so values can
be shared freely between threads or tasks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadDimension,
    DimensionMismatch,
    NonFiniteEntry,
    NonPositiveEntry,
    ReciprocityViolation,
)

#: Tolerance on |c_ij * c_ji - 1| when reciprocity enforcement is on.
RECIPROCITY_TOL = 1e-6
#: Tolerance on |sum - 1| for normalized vectors and weight columns.
NORMALIZATION_TOL = 1e-12

DERIVATION_METHODS = ("evm", "gmm", "llsm")
AGGREGATION_MODES = ("gaip", "aaip")
SOLVERS = ("dia", "nm", "de", "sa", "exact")


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


def _check_positive_finite(values: np.ndarray, what: str, expert: str | None = None):
    if not np.isfinite(values).all():
        raise NonFiniteEntry(f"{what} contains a non-finite value", expert=expert)
    if (values <= 0).any():
        raise NonPositiveEntry(f"{what} contains a non-positive value", expert=expert)


@dataclass(frozen=True, eq=False)
class PCMatrix:
    """One expert's n-by-n pairwise comparison table.

    ``entries[i, j]`` says how many times alternative i outranks alternative
    j in this expert's judgment; NaN marks a comparison the expert did not
    provide. Construct through :func:`validate_pcmatrix` rather than
    directly.
    """

    entries: np.ndarray
    expert_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(np.asarray(self.entries, dtype=float)))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def present_mask(self) -> np.ndarray:
        """Boolean mask of provided comparisons."""
        return ~np.isnan(self.entries)

    @property
    def is_complete(self) -> bool:
        return bool(self.present_mask.all())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PCMatrix):
            return NotImplemented
        return self.expert_id == other.expert_id and np.array_equal(
            self.entries, other.entries, equal_nan=True
        )

    def to_lists(self) -> list:
        """Nested lists with None for absent comparisons (JSON-friendly)."""
        return [[None if math.isnan(v) else v for v in row] for row in self.entries.tolist()]


def validate_pcmatrix(raw, enforce_reciprocity: bool = True, expert_id: str = "") -> PCMatrix:
    """Validate a raw comparison table and return an immutable PCMatrix.

    The diagonal is filled with 1 when absent; with reciprocity enforcement
    on, a missing half of a pair is auto-filled with the reciprocal of the
    present half, and present pairs must satisfy c_ij * c_ji = 1 within
    ``RECIPROCITY_TOL``. Present entries are never overwritten.

    Raises BadDimension, NonPositiveEntry, NonFiniteEntry or
    ReciprocityViolation.
    """
    who = expert_id or None
    entries = np.array(raw, dtype=float)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise BadDimension(f"comparison table must be square, got shape {entries.shape}", expert=who)
    n = entries.shape[0]
    if n < 2:
        raise BadDimension("comparison table needs at least 2 alternatives", expert=who)

    present = ~np.isnan(entries)
    if np.any(present & np.isinf(entries)):
        i, j = map(int, np.argwhere(present & np.isinf(entries))[0])
        raise NonFiniteEntry(f"c[{i + 1},{j + 1}] is infinite", expert=who)
    bad = present & (entries <= 0)
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise NonPositiveEntry(f"c[{i + 1},{j + 1}] = {entries[i, j]:g} must be > 0", expert=who)

    for i in range(n):
        cii = entries[i, i]
        if math.isnan(cii):
            entries[i, i] = 1.0
        elif abs(cii - 1.0) > RECIPROCITY_TOL:
            raise ReciprocityViolation(f"diagonal c[{i + 1},{i + 1}] = {cii:g} must equal 1", expert=who)
        else:
            entries[i, i] = 1.0

    if enforce_reciprocity:
        for i in range(n):
            for j in range(i + 1, n):
                a, b = entries[i, j], entries[j, i]
                have_a, have_b = not math.isnan(a), not math.isnan(b)
                if have_a and have_b:
                    if abs(a * b - 1.0) > RECIPROCITY_TOL:
                        raise ReciprocityViolation(
                            f"c[{i + 1},{j + 1}] * c[{j + 1},{i + 1}] = {a * b:.9g} deviates from 1",
                            expert=who,
                        )
                elif have_a:
                    entries[j, i] = 1.0 / a
                elif have_b:
                    entries[i, j] = 1.0 / b

    return PCMatrix(entries=entries, expert_id=expert_id)


def comparison_graph_connected(m: PCMatrix) -> bool:
    """True iff the undirected graph of provided comparisons is connected.

    Connectivity is the solvability condition for deriving weights from an
    incomplete table.
    """
    n = m.n
    adjacency = m.present_mask.copy()
    np.fill_diagonal(adjacency, False)
    adjacency |= adjacency.T
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        i = stack.pop()
        for j in np.flatnonzero(adjacency[i]):
            if not seen[j]:
                seen[j] = True
                stack.append(int(j))
    return bool(seen.all())


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Positive priority weights over the n alternatives from one expert."""

    values: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DimensionMismatch("weight vector must be one-dimensional and non-empty")
        _check_positive_finite(values, "weight vector")
        if self.normalized and abs(values.sum() - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"weight vector marked normalized but sums to {values.sum()!r}")
        object.__setattr__(self, "values", _frozen(values))

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """Column-wise stack of all experts' weight vectors.

    ``values[i, q]`` is expert q's weight for alternative i. Every column is
    normalized to sum 1. In the peer-assessment setting the matrix is square:
    the people being rated are the raters.
    """

    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        if values.ndim != 2 or 0 in values.shape:
            raise DimensionMismatch("weight matrix must be two-dimensional and non-empty")
        _check_positive_finite(values, "weight matrix")
        sums = values.sum(axis=0)
        off = np.max(np.abs(sums - 1.0))
        if off > NORMALIZATION_TOL:
            raise ValueError(f"every weight column must sum to 1; worst deviation {off:g}")
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def from_columns(cls, columns) -> "WeightMatrix":
        arrays = [c.values if isinstance(c, WeightVector) else np.asarray(c, dtype=float) for c in columns]
        lengths = {a.shape[0] for a in arrays}
        if len(lengths) != 1:
            raise DimensionMismatch("all weight columns must have the same length")
        return cls(np.column_stack(arrays))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]

    def column(self, q: int) -> np.ndarray:
        return self.values[:, q]


@dataclass(frozen=True, eq=False)
class ExpertPriorityVector:
    """Strictly positive voting priorities over the experts, summing to 1."""

    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DimensionMismatch("priority vector must be one-dimensional and non-empty")
        _check_positive_finite(values, "priority vector")
        if abs(values.sum() - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"priority vector must sum to 1, got {values.sum()!r}")
        object.__setattr__(self, "values", _frozen(values))

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class SolverConfig:
    """Method, mode, solver selection plus tolerances and budgets.

    ``gamma``/``delta``/``epsilon`` are the direct iteration's iteration cap,
    iterate-difference tolerance and residual tolerance. The remaining knobs
    parameterize the global optimizers; defaults keep a full solve at n <= 10
    well under a second.
    """

    derivation_method: str = "gmm"
    aggregation_mode: str = "gaip"
    solver: str = "dia"
    gamma: int = 1000
    delta: float = 1e-10
    epsilon: float = 1e-8
    seed: int = 0
    de_population: int = 40
    de_scale: float = 0.8
    de_crossover: float = 0.9
    de_generations: int = 200
    de_stagnation: int = 100
    sa_starts: int = 4
    sa_iterations: int = 2000
    sa_stall: int = 500
    sa_shrink: float = 0.99
    nm_starts: int = 8
    nm_initial_step: float = 0.5
    nm_max_evals: int | None = None
    record_trace: bool = False

    def __post_init__(self):
        if self.derivation_method not in DERIVATION_METHODS:
            raise ValueError(f"derivation_method must be one of {DERIVATION_METHODS}")
        if self.aggregation_mode not in AGGREGATION_MODES:
            raise ValueError(f"aggregation_mode must be one of {AGGREGATION_MODES}")
        if self.solver not in SOLVERS:
            raise ValueError(f"solver must be one of {SOLVERS}")
        if self.gamma < 1:
            raise ValueError("gamma must be at least 1")
        if not (self.delta > 0 and self.epsilon > 0):
            raise ValueError("delta and epsilon must be positive")
        if self.de_population < 4:
            raise ValueError("de_population must be at least 4")
        if not 0 < self.de_crossover <= 1:
            raise ValueError("de_crossover must be in (0, 1]")
        if not 0 < self.de_scale < 2:
            raise ValueError("de_scale must be in (0, 2)")
        if self.de_generations < 1:
            raise ValueError("de_generations must be at least 1")
        if self.sa_starts < 1:
            raise ValueError("sa_starts must be at least 1")
        if self.sa_iterations < 1:
            raise ValueError("sa_iterations must be at least 1")
        if not 0 < self.sa_shrink < 1:
            raise ValueError("sa_shrink must be in (0, 1)")
        if self.nm_starts < 1:
            raise ValueError("nm_starts must be at least 1")
        if self.nm_initial_step <= 0:
            raise ValueError("nm_initial_step must be positive")
        if self.nm_max_evals is not None and self.nm_max_evals < 1:
            raise ValueError("nm_max_evals must be at least 1 when given")


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one fixed-point solve."""

    shares: ExpertPriorityVector
    residual: float
    iterations: int
    converged: bool
    per_expert_weights: WeightMatrix
    consistency: tuple | None = None
    trace: tuple | None = None
    solver: str = ""
    ambiguous: bool = False
