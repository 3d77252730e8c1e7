"""Self-consistent credit splitting from mutual pairwise comparisons.

A group of peers rates each other with pairwise comparison tables. Each
member's voting priority over the final split is coupled to their own share:
the result is the fixed point p = AGG(W, p), where W stacks the per-member
weight vectors and AGG is a weighted geometric mean (multiplicative model)
or a weighted arithmetic mean (additive model). The fixed point is solved by
direct iteration, an exact linear solve (additive model only), or
derivative-free global optimization of the residual.
"""

from . import _kernels
from .aggregate import aaip, gaip, normalize
from .errors import (
    BadDimension,
    DimensionMismatch,
    DisconnectedGraph,
    IncompleteMatrix,
    NoConvergence,
    NonFiniteEntry,
    NonPositiveEntry,
    NoSolution,
    ParseError,
    PeerSplitError,
    ReciprocityViolation,
    SchemaError,
    SingularSystem,
)
from .fixedpoint import aaip_exact, dia_solve, residual_g, residual_h
from .model import (
    ExpertPriorityVector,
    PCMatrix,
    SolveReport,
    SolverConfig,
    WeightMatrix,
    WeightVector,
    comparison_graph_connected,
    validate_pcmatrix,
)
from .optimize import (
    MinimizeResult,
    Objective,
    build_residual_objective,
    differential_evolution,
    nelder_mead,
    nelder_mead_multistart,
    simulated_annealing,
)
from .panel import PanelDocument, ReportDocument, parse_input, parse_report, render_report
from .pipeline import run_pipeline, solve_weight_matrix
from .prioritize import (
    consistency_index,
    derive,
    derive_evm,
    derive_gmm,
    derive_llsm,
    principal_eigenvector,
)

__version__ = "0.1.0"

#: Kernel backend bound at import ('compiled' or 'pure').
kernel_backend = _kernels.backend_name

__all__ = [
    "PCMatrix", "WeightVector", "WeightMatrix", "ExpertPriorityVector",
    "SolverConfig", "SolveReport",
    "validate_pcmatrix", "comparison_graph_connected",
    "derive_evm", "derive_gmm", "derive_llsm", "derive",
    "principal_eigenvector", "consistency_index",
    "gaip", "aaip", "normalize",
    "residual_g", "residual_h", "dia_solve", "aaip_exact",
    "Objective", "MinimizeResult", "build_residual_objective",
    "nelder_mead", "nelder_mead_multistart",
    "differential_evolution", "simulated_annealing",
    "PanelDocument", "ReportDocument",
    "parse_input", "parse_report", "render_report",
    "run_pipeline", "solve_weight_matrix",
    "kernel_backend",
    "PeerSplitError", "BadDimension", "NonPositiveEntry", "NonFiniteEntry",
    "ReciprocityViolation", "IncompleteMatrix", "DisconnectedGraph",
    "DimensionMismatch", "NoConvergence", "SingularSystem",
    "ParseError", "SchemaError", "NoSolution",
]
