"""Derivative-free minimizers over a bounded box.

Used when the direct iteration fails: the residual objectives are recast
over z = ln y, which keeps the share variables positive without explicit
constraints and bounds the search. All three solvers are deterministic given
the configured seed and record the best value seen after each step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels as kernels
from .errors import DimensionMismatch
from .fixedpoint import _square_weights
from .model import SolverConfig

#: Half-width of the log-share search box; y = exp(z) spans ~[6e-6, 1.6e5].
LOG_BOUND = 12.0
#: Nelder-Mead stops when max - min function value over the simplex drops below this.
NM_SPREAD_TOL = 1e-12
#: Annealing stops once the proposal radius is numerically frozen.
SA_MIN_RADIUS = 1e-13


@dataclass(frozen=True)
class Objective:
    """A deterministic function on a closed box, with per-coordinate bounds."""

    dimension: int
    evaluate: Callable[[np.ndarray], float]
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.ascontiguousarray(self.lower, dtype=float)
        upper = np.ascontiguousarray(self.upper, dtype=float)
        if lower.shape != (self.dimension,) or upper.shape != (self.dimension,):
            raise DimensionMismatch("bounds must match the objective dimension")
        if not (lower < upper).all():
            raise ValueError("every lower bound must be below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.minimum(np.maximum(x, self.lower), self.upper)


@dataclass
class MinimizeResult:
    """Best point found, its value, and bookkeeping.

    ``history`` holds the best-so-far value after each iteration (generation
    for the population solver), so it is non-increasing by construction.
    """

    x: np.ndarray
    value: float
    evaluations: int
    budget_exhausted: bool = False
    history: list = field(default_factory=list)


def build_residual_objective(w, mode: str) -> Objective:
    """Residual of the chosen model as a function of z, with y = exp(z).

    The box z in [-LOG_BOUND, LOG_BOUND]^n makes y > 0 unconditional.
    """
    values = _square_weights(w)
    n = values.shape[0]
    if mode == "gaip":
        def evaluate(z, _w=values):
            return kernels.objective_geometric(_w, np.ascontiguousarray(z, dtype=float))
    elif mode == "aaip":
        def evaluate(z, _w=values):
            return kernels.objective_arithmetic(_w, np.ascontiguousarray(z, dtype=float))
    else:
        raise ValueError(f"unknown aggregation mode {mode!r}")
    return Objective(
        dimension=n,
        evaluate=evaluate,
        lower=np.full(n, -LOG_BOUND),
        upper=np.full(n, LOG_BOUND),
    )


class _BudgetExhausted(Exception):
    pass


def nelder_mead(obj: Objective, start, cfg: SolverConfig | None = None) -> MinimizeResult:
    """Downhill simplex with the classical coefficients (1, 2, 1/2, 1/2).

    Candidates are clamped to the box. Stops when the simplex function
    spread falls below ``NM_SPREAD_TOL`` or the evaluation budget
    (``nm_max_evals``, default 200 * dimension) runs out; exhaustion is
    flagged on the result, not raised.
    """
    cfg = cfg or SolverConfig()
    n = obj.dimension
    budget = cfg.nm_max_evals if cfg.nm_max_evals is not None else 200 * n
    evals = 0

    def f(x: np.ndarray) -> float:
        nonlocal evals
        if evals >= budget:
            raise _BudgetExhausted
        evals += 1
        return float(obj.evaluate(x))

    start = obj.clip(np.ascontiguousarray(start, dtype=float))
    if start.shape != (n,):
        raise DimensionMismatch(f"start point must have length {n}")

    simplex = [start]
    for i in range(n):
        vertex = start.copy()
        vertex[i] += cfg.nm_initial_step
        if vertex[i] > obj.upper[i]:
            vertex[i] = start[i] - cfg.nm_initial_step
        simplex.append(obj.clip(vertex))

    values: list[float] = []
    history: list[float] = []
    exhausted = False
    try:
        for vertex in simplex:
            values.append(f(vertex))
        while True:
            order = sorted(range(n + 1), key=lambda idx: values[idx])
            simplex = [simplex[idx] for idx in order]
            values = [values[idx] for idx in order]
            history.append(values[0])
            if values[-1] - values[0] < NM_SPREAD_TOL:
                break
            centroid = np.mean(simplex[:-1], axis=0)
            reflected = obj.clip(centroid + (centroid - simplex[-1]))
            fr = f(reflected)
            if fr < values[0]:
                expanded = obj.clip(centroid + 2.0 * (reflected - centroid))
                fe = f(expanded)
                if fe < fr:
                    simplex[-1], values[-1] = expanded, fe
                else:
                    simplex[-1], values[-1] = reflected, fr
            elif fr < values[-2]:
                simplex[-1], values[-1] = reflected, fr
            else:
                if fr < values[-1]:
                    contracted = obj.clip(centroid + 0.5 * (reflected - centroid))
                    fc = f(contracted)
                    accept = fc <= fr
                else:
                    contracted = obj.clip(centroid + 0.5 * (simplex[-1] - centroid))
                    fc = f(contracted)
                    accept = fc < values[-1]
                if accept:
                    simplex[-1], values[-1] = contracted, fc
                else:
                    for i in range(1, n + 1):
                        simplex[i] = obj.clip(simplex[0] + 0.5 * (simplex[i] - simplex[0]))
                        values[i] = f(simplex[i])
    except _BudgetExhausted:
        exhausted = True

    best = min(range(len(values)), key=lambda idx: values[idx])
    return MinimizeResult(
        x=simplex[best],
        value=values[best],
        evaluations=evals,
        budget_exhausted=exhausted,
        history=history,
    )


def nelder_mead_multistart(obj: Objective, cfg: SolverConfig | None = None) -> list[MinimizeResult]:
    """One simplex run from the box center plus seeded random starts."""
    cfg = cfg or SolverConfig()
    rng = np.random.default_rng(cfg.seed)
    starts = [(obj.lower + obj.upper) / 2.0]
    for _ in range(cfg.nm_starts - 1):
        starts.append(rng.uniform(obj.lower, obj.upper))
    return [nelder_mead(obj, start, cfg) for start in starts]


def _pick_distinct(rng: np.random.Generator, size: int, taken: set) -> int:
    while True:
        candidate = int(rng.integers(size))
        if candidate not in taken:
            return candidate


def differential_evolution(obj: Objective, cfg: SolverConfig | None = None) -> MinimizeResult:
    """Population search with difference-vector mutation and binomial crossover.

    For each member x_j, three distinct others combine into the donor
    x_w + s (x_u - x_v); the candidate takes each coordinate from the donor
    with probability rho (one coordinate forced, so candidates never clone
    their parent), is clamped to the box, and replaces x_j when strictly
    better. Generations are synchronous. Stops after ``de_generations`` or
    ``de_stagnation`` generations without a new best.
    """
    cfg = cfg or SolverConfig()
    rng = np.random.default_rng(cfg.seed)
    n, m = obj.dimension, cfg.de_population

    population = rng.uniform(obj.lower, obj.upper, size=(m, n))
    values = np.array([float(obj.evaluate(x)) for x in population])
    evals = m
    best_idx = int(np.argmin(values))
    best_x = population[best_idx].copy()
    best_value = float(values[best_idx])
    history = [best_value]
    stale = 0

    for _ in range(cfg.de_generations):
        next_population = population.copy()
        next_values = values.copy()
        improved_best = False
        for j in range(m):
            u = _pick_distinct(rng, m, {j})
            v = _pick_distinct(rng, m, {j, u})
            wdx = _pick_distinct(rng, m, {j, u, v})
            donor = population[wdx] + cfg.de_scale * (population[u] - population[v])
            mask = rng.random(n) < cfg.de_crossover
            mask[int(rng.integers(n))] = True
            candidate = obj.clip(np.where(mask, donor, population[j]))
            value = float(obj.evaluate(candidate))
            evals += 1
            if value < values[j]:
                next_population[j] = candidate
                next_values[j] = value
                if value < best_value:
                    best_value, best_x = value, candidate.copy()
                    improved_best = True
        population, values = next_population, next_values
        history.append(best_value)
        stale = 0 if improved_best else stale + 1
        if cfg.de_stagnation and stale >= cfg.de_stagnation:
            break

    return MinimizeResult(x=best_x, value=best_value, evaluations=evals, history=history)


def _sa_step(rng: np.random.Generator, n: int, radius: np.ndarray) -> np.ndarray:
    # Move mixture: all coordinates independently, all coherently, or one
    # alone. Each stays inside the max-norm ball of the current radius; the
    # coherent and single-coordinate moves are what traverse the scale
    # direction and recover individually stranded coordinates of the
    # log-share objectives, which independent proposals alone almost never do.
    kind = rng.integers(3)
    if kind == 0:
        return rng.uniform(-radius, radius)
    if kind == 1:
        return np.full(n, rng.uniform(-radius.max(), radius.max()))
    step = np.zeros(n)
    j = int(rng.integers(n))
    step[j] = rng.uniform(-radius[j], radius[j])
    return step


def simulated_annealing(obj: Objective, cfg: SolverConfig | None = None) -> MinimizeResult:
    """Multi-start annealing with a shrinking proposal neighborhood.

    Each start proposes steps inside radius r0 * sa_shrink^i of the current
    point (r0 = half the box width), drawing from a mixture of full,
    coherent and single-coordinate moves. Improvements are always accepted;
    a worsening of df is accepted with probability
    exp(-df * (i + 1) / (|f0| + 1e-12)) where f0 is the current value, so
    uphill moves die out as iterations accumulate. A start ends after
    ``sa_iterations`` proposals, a frozen radius, or ``sa_stall`` consecutive
    rejections. Per-start seeds derive from (seed, start index), so the
    result does not depend on execution order.
    """
    cfg = cfg or SolverConfig()
    best_x = None
    best_value = math.inf
    evals = 0
    history: list[float] = []

    for start_index in range(cfg.sa_starts):
        rng = np.random.default_rng([cfg.seed, start_index])
        x = rng.uniform(obj.lower, obj.upper)
        fx = float(obj.evaluate(x))
        evals += 1
        if fx < best_value:
            best_value, best_x = fx, x.copy()
        history.append(best_value)
        radius0 = (obj.upper - obj.lower) / 2.0
        stall = 0
        for i in range(cfg.sa_iterations):
            radius = radius0 * (cfg.sa_shrink ** i)
            if float(radius.max()) < SA_MIN_RADIUS:
                break
            candidate = obj.clip(x + _sa_step(rng, obj.dimension, radius))
            fc = float(obj.evaluate(candidate))
            evals += 1
            df = fc - fx
            if df <= 0.0:
                accept = True
            else:
                accept = rng.random() < math.exp(-df * (i + 1) / (abs(fx) + 1e-12))
            if accept:
                x, fx = candidate, fc
                stall = 0
                if fc < best_value:
                    best_value, best_x = fc, candidate.copy()
            else:
                stall += 1
            history.append(best_value)
            if cfg.sa_stall and stall >= cfg.sa_stall:
                break

    return MinimizeResult(x=best_x, value=best_value, evaluations=evals, history=history)
