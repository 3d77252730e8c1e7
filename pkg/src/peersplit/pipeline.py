"""End-to-end solve: derive per-peer weights, couple them, solve, report."""

from __future__ import annotations

import dataclasses

import numpy as np

from .aggregate import normalize
from .errors import NoSolution
from .fixedpoint import aaip_exact, dia_solve, residual_h
from .model import SolveReport, SolverConfig, WeightMatrix
from .optimize import (
    build_residual_objective,
    differential_evolution,
    nelder_mead_multistart,
    simulated_annealing,
)
from .panel import PanelDocument, ReportDocument, config_from_options
from .prioritize import consistency_index, derive

#: Two near-optimal solutions further apart than this flag an ambiguous split.
AMBIGUITY_TOL = 1e-4


def _optimizer_solve(w: WeightMatrix, cfg: SolverConfig, which: str) -> SolveReport:
    objective = build_residual_objective(w, cfg.aggregation_mode)
    ambiguous = False
    if which == "nm":
        runs = nelder_mead_multistart(objective, cfg)
        best = min(runs, key=lambda r: r.value)
        evaluations = sum(r.evaluations for r in runs)
        if best.value <= cfg.epsilon:
            best_shares = normalize(np.exp(best.x)).values
            for run in runs:
                if run is best or run.value > cfg.epsilon:
                    continue
                other = normalize(np.exp(run.x)).values
                if float(np.max(np.abs(other - best_shares))) > AMBIGUITY_TOL:
                    ambiguous = True
                    break
    elif which == "de":
        best = differential_evolution(objective, cfg)
        evaluations = best.evaluations
    elif which == "sa":
        best = simulated_annealing(objective, cfg)
        evaluations = best.evaluations
    else:
        raise ValueError(f"unknown optimizer {which!r}")

    shares = normalize(np.exp(best.x))
    return SolveReport(
        shares=shares,
        residual=float(best.value),
        iterations=evaluations,
        converged=best.value <= cfg.epsilon,
        per_expert_weights=w,
        solver=which,
        ambiguous=ambiguous,
    )


def solve_weight_matrix(w: WeightMatrix, cfg: SolverConfig | None = None) -> SolveReport:
    """Solve the self-consistency condition on an assembled weight matrix.

    ``solver="dia"`` retries with multi-start Nelder-Mead when the direct
    iteration does not converge, keeping whichever attempt has the smaller
    residual (solver label ``"dia+nm"`` records the fallback). Non-convergence
    is a report state here; ``run_pipeline`` turns it into an error.
    """
    cfg = cfg or SolverConfig()
    if cfg.solver == "dia":
        report = dia_solve(w, cfg)
        if not report.converged:
            fallback = _optimizer_solve(w, cfg, "nm")
            if fallback.residual <= report.residual:
                report = dataclasses.replace(fallback, solver="dia+nm")
            else:
                report = dataclasses.replace(report, solver="dia+nm")
        return report
    if cfg.solver == "exact":
        if cfg.aggregation_mode != "aaip":
            raise ValueError("the exact solver applies only to the additive (aaip) mode")
        shares = aaip_exact(w)
        residual = residual_h(w, shares.values)
        return SolveReport(
            shares=shares,
            residual=residual,
            iterations=1,
            converged=residual <= cfg.epsilon,
            per_expert_weights=w,
            solver="exact",
        )
    return _optimizer_solve(w, cfg, cfg.solver)


def run_pipeline(doc: PanelDocument, cfg: SolverConfig | None = None) -> ReportDocument:
    """Derive weights for every peer, solve the fixed point, build the report.

    Peers with incomplete matrices are upgraded to the least-squares
    derivation (recorded in the report) when the configured method cannot
    handle gaps. Raises NoSolution, with the best-attempt report attached,
    when no solver reaches the residual tolerance.
    """
    cfg = cfg if cfg is not None else config_from_options(doc.options)
    upgraded = []
    columns = []
    weights: dict[str, list] = {}
    consistency: dict[str, dict] = {}
    for name in doc.alternatives:
        matrix = doc.matrices[name]
        method = cfg.derivation_method
        if not matrix.is_complete and method != "llsm":
            method = "llsm"
            upgraded.append(name)
        vector = derive(matrix, method)
        columns.append(vector.values)
        weights[name] = [float(v) for v in vector.values]
        if matrix.is_complete:
            ci, cr = consistency_index(matrix)
        else:
            ci, cr = None, None
        consistency[name] = {"ci": ci, "cr": cr}

    stacked = WeightMatrix(np.column_stack(columns))
    solve = solve_weight_matrix(stacked, cfg)
    solve = dataclasses.replace(
        solve,
        consistency=tuple((consistency[name]["ci"], consistency[name]["cr"]) for name in doc.alternatives),
    )

    report = ReportDocument(
        alternatives=doc.alternatives,
        mode=cfg.aggregation_mode,
        method=cfg.derivation_method,
        solver=solve.solver,
        converged=solve.converged,
        iterations=solve.iterations,
        residual=solve.residual,
        shares={name: float(s) for name, s in zip(doc.alternatives, solve.shares.values)},
        shares_percent={name: float(s) * 100.0 for name, s in zip(doc.alternatives, solve.shares.values)},
        weights=weights,
        consistency=consistency,
        llsm_upgraded=tuple(upgraded),
        ambiguous=solve.ambiguous,
        trace=tuple(tuple(float(x) for x in step) for step in solve.trace) if solve.trace is not None else None,
    )
    if not solve.converged:
        raise NoSolution(
            f"no solver reached residual {cfg.epsilon:g} (best attempt: {solve.residual:g})",
            report=report,
        )
    return report
