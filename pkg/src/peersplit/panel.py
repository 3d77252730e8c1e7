"""Panel documents and report documents (JSON on disk, tables for humans).

Input schema::

    {
      "alternatives": ["alice", "bob"],
      "matrices": {
        "alice": [[1, 2], [0.5, 1]],
        "bob":   [[1, null], [1, 1]]
      },
      "options": {"mode": "gaip", "method": "gmm", "solver": "dia"}
    }

Peers are both the raters and the rated, so every alternative supplies one
matrix and every matrix is n x n over the same alternatives, in order. null
marks a comparison the peer did not provide. ``options`` may override any
solver setting; command-line flags take precedence over it.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .errors import ParseError, SchemaError
from .model import PCMatrix, SolverConfig, validate_pcmatrix

#: option key in the document -> SolverConfig field
OPTION_FIELDS = {
    "mode": "aggregation_mode",
    "method": "derivation_method",
    "solver": "solver",
    "gamma": "gamma",
    "delta": "delta",
    "epsilon": "epsilon",
    "seed": "seed",
    "de_population": "de_population",
    "de_scale": "de_scale",
    "de_crossover": "de_crossover",
    "de_generations": "de_generations",
    "de_stagnation": "de_stagnation",
    "sa_starts": "sa_starts",
    "sa_iterations": "sa_iterations",
    "sa_stall": "sa_stall",
    "sa_shrink": "sa_shrink",
    "nm_starts": "nm_starts",
    "nm_initial_step": "nm_initial_step",
    "nm_max_evals": "nm_max_evals",
    "trace": "record_trace",
}


@dataclass(frozen=True)
class PanelDocument:
    """Validated panel: peer names, one comparison matrix per peer, options."""

    alternatives: tuple[str, ...]
    matrices: dict[str, PCMatrix]
    options: dict

    @property
    def n(self) -> int:
        return len(self.alternatives)


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def parse_input(text: str) -> PanelDocument:
    """Parse and validate a panel document.

    Raises ParseError for malformed JSON (with line/column), SchemaError for
    structural problems, and the matrix validation errors (attributed to the
    offending peer) for bad comparison values.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None

    if not isinstance(data, dict):
        raise SchemaError("top-level value must be an object")
    unknown = set(data) - {"alternatives", "matrices", "options"}
    if unknown:
        raise SchemaError(f"unknown top-level keys: {sorted(unknown)}")

    alternatives = data.get("alternatives")
    if not isinstance(alternatives, list) or len(alternatives) < 2:
        raise SchemaError("'alternatives' must list at least 2 peer names")
    if not all(isinstance(a, str) and a for a in alternatives):
        raise SchemaError("every alternative must be a non-empty string")
    if len(set(alternatives)) != len(alternatives):
        raise SchemaError("alternative names must be unique")
    n = len(alternatives)

    raw_matrices = data.get("matrices")
    if not isinstance(raw_matrices, dict):
        raise SchemaError("'matrices' must map each peer name to a comparison table")
    stray = set(raw_matrices) - set(alternatives)
    if stray:
        raise SchemaError(f"matrices given for unknown peers: {sorted(stray)}")
    missing = [a for a in alternatives if a not in raw_matrices]
    if missing:
        raise SchemaError(f"no matrix supplied for: {missing}")

    matrices: dict[str, PCMatrix] = {}
    for name in alternatives:
        table = raw_matrices[name]
        if not isinstance(table, list) or len(table) != n:
            raise SchemaError(f"matrix for '{name}' must have {n} rows")
        for r, row in enumerate(table):
            if not isinstance(row, list) or len(row) != n:
                raise SchemaError(f"matrix for '{name}', row {r + 1}: expected {n} entries")
            for c, cell in enumerate(row):
                if cell is not None and not _is_number(cell):
                    raise SchemaError(
                        f"matrix for '{name}', row {r + 1}, column {c + 1}: expected a number or null"
                    )
        matrices[name] = validate_pcmatrix(
            [[float("nan") if cell is None else float(cell) for cell in row] for row in table],
            expert_id=name,
        )

    options = data.get("options", {})
    if not isinstance(options, dict):
        raise SchemaError("'options' must be an object")
    bad = set(options) - set(OPTION_FIELDS)
    if bad:
        raise SchemaError(f"unknown options: {sorted(bad)}")

    return PanelDocument(alternatives=tuple(alternatives), matrices=matrices, options=dict(options))


def config_from_options(options: dict, base: SolverConfig | None = None) -> SolverConfig:
    """Apply document options on top of a base configuration."""
    base = base or SolverConfig()
    kwargs = {OPTION_FIELDS[key]: value for key, value in options.items()}
    try:
        return dataclasses.replace(base, **kwargs)
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"bad option value: {exc}") from None


@dataclass(frozen=True)
class ReportDocument:
    """Full solve outcome keyed by peer name; renders to JSON or a table."""

    alternatives: tuple[str, ...]
    mode: str
    method: str
    solver: str
    converged: bool
    iterations: int
    residual: float
    shares: dict[str, float]
    shares_percent: dict[str, float]
    weights: dict[str, list]
    consistency: dict[str, dict]
    llsm_upgraded: tuple[str, ...] = ()
    ambiguous: bool = False
    trace: tuple | None = None

    def to_dict(self) -> dict:
        doc = {
            "alternatives": list(self.alternatives),
            "mode": self.mode,
            "method": self.method,
            "solver": self.solver,
            "converged": self.converged,
            "iterations": self.iterations,
            "residual": self.residual,
            "shares": {name: self.shares[name] for name in self.alternatives},
            "shares_percent": {name: self.shares_percent[name] for name in self.alternatives},
            "weights": {name: list(self.weights[name]) for name in self.alternatives},
            "consistency": {name: dict(self.consistency[name]) for name in self.alternatives},
            "llsm_upgraded": list(self.llsm_upgraded),
            "ambiguous": self.ambiguous,
        }
        if self.trace is not None:
            doc["trace"] = [list(step) for step in self.trace]
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "ReportDocument":
        try:
            return cls(
                alternatives=tuple(doc["alternatives"]),
                mode=doc["mode"],
                method=doc["method"],
                solver=doc["solver"],
                converged=doc["converged"],
                iterations=doc["iterations"],
                residual=doc["residual"],
                shares=dict(doc["shares"]),
                shares_percent=dict(doc["shares_percent"]),
                weights={k: list(v) for k, v in doc["weights"].items()},
                consistency={k: dict(v) for k, v in doc["consistency"].items()},
                llsm_upgraded=tuple(doc.get("llsm_upgraded", ())),
                ambiguous=doc.get("ambiguous", False),
                trace=tuple(tuple(step) for step in doc["trace"]) if "trace" in doc else None,
            )
        except KeyError as exc:
            raise SchemaError(f"report document is missing {exc}") from None


def parse_report(text: str) -> ReportDocument:
    """Inverse of machine-mode rendering."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise SchemaError("report document must be an object")
    return ReportDocument.from_dict(doc)


def _round_percent(value: float) -> Decimal:
    # Half-up, the rounding people expect for money splits; round() banker's rounding is not it.
    return Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)


def render_report(report: ReportDocument, format: str = "machine") -> str:
    """Render to canonical JSON ('machine') or an aligned table ('table').

    Machine mode keeps full precision and round-trips through
    :func:`parse_report` byte-identically. Table mode rounds percentages
    half-up to two decimals; the machine document stays authoritative.
    """
    if format == "machine":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if format != "table":
        raise ValueError(f"unknown report format {format!r}")

    rounded = {name: _round_percent(report.shares_percent[name]) for name in report.alternatives}
    total = sum(rounded.values())
    name_width = max(len("peer"), len("total"), *(len(name) for name in report.alternatives))

    def fmt_index(value) -> str:
        return "-" if value is None else f"{value:.4f}"

    lines = [f"{'peer':<{name_width}}  {'share':>8}  {'CI':>7}  {'CR':>7}"]
    for name in report.alternatives:
        entry = report.consistency[name]
        lines.append(
            f"{name:<{name_width}}  {str(rounded[name]) + '%':>8}"
            f"  {fmt_index(entry.get('ci')):>7}  {fmt_index(entry.get('cr')):>7}"
        )
    lines.append(f"{'total':<{name_width}}  {str(total) + '%':>8}")
    lines.append("")
    lines.append(
        f"mode={report.mode}  method={report.method}  solver={report.solver}"
        f"  iterations={report.iterations}  residual={report.residual:.6g}"
        f"  converged={'yes' if report.converged else 'no'}"
    )
    if report.llsm_upgraded:
        lines.append("llsm upgrade (incomplete matrix): " + ", ".join(report.llsm_upgraded))
    if report.ambiguous:
        lines.append("warning: independent solver runs found distinct near-optimal splits")
    lines.append("")
    return "\n".join(lines)
