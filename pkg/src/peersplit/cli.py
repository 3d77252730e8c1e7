"""Command-line entry point: peer-split <input-file> [flags].

Reads a panel document, runs the full pipeline, writes the report to stdout
and diagnostics to stderr. Exit codes: 0 success, 2 parse/schema error,
3 validation error, 4 non-convergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .errors import VALIDATION_ERRORS, NoSolution, ParseError, SchemaError
from .panel import config_from_options, parse_input, render_report
from .pipeline import run_pipeline

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NO_SOLUTION = 4


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive number")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peer-split",
        description="Split credit among a group of peers from their mutual pairwise comparisons.",
    )
    parser.add_argument("input", help="panel document (JSON)")
    parser.add_argument("--mode", choices=["gaip", "aaip"], default=None,
                        help="aggregation model: multiplicative (gaip, default) or additive (aaip)")
    parser.add_argument("--method", choices=["evm", "gmm", "llsm"], default=None,
                        help="weight derivation method (default gmm)")
    parser.add_argument("--solver", choices=["dia", "nm", "de", "sa", "exact"], default=None,
                        help="fixed-point solver (default dia, with nm fallback); exact needs --mode aaip")
    parser.add_argument("--gamma", type=_positive_int, default=None, help="iteration cap for dia")
    parser.add_argument("--delta", type=_positive_float, default=None,
                        help="iterate-difference tolerance for dia")
    parser.add_argument("--epsilon", type=_positive_float, default=None, help="residual tolerance")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed for the global optimizers")
    parser.add_argument("--format", choices=["machine", "table"], default="table",
                        help="machine = full-precision JSON, table = human-readable (default)")
    parser.add_argument("--trace", action=argparse.BooleanOptionalAction, default=None,
                        help="include the iterate trace in the report")
    return parser


_FLAG_FIELDS = {
    "mode": "aggregation_mode",
    "method": "derivation_method",
    "solver": "solver",
    "gamma": "gamma",
    "delta": "delta",
    "epsilon": "epsilon",
    "seed": "seed",
    "trace": "record_trace",
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"peer-split: cannot read {args.input}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_PARSE

    try:
        doc = parse_input(text)
        cfg = config_from_options(doc.options)
        overrides = {
            field: getattr(args, flag)
            for flag, field in _FLAG_FIELDS.items()
            if getattr(args, flag) is not None
        }
        cfg = dataclasses.replace(cfg, **overrides)
    except (ParseError, SchemaError) as exc:
        print(f"peer-split: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except VALIDATION_ERRORS as exc:
        print(f"peer-split: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"peer-split: bad option: {exc}", file=sys.stderr)
        return EXIT_PARSE

    if cfg.solver == "exact" and cfg.aggregation_mode != "aaip":
        print("peer-split: the exact solver requires --mode aaip", file=sys.stderr)
        return EXIT_PARSE

    try:
        report = run_pipeline(doc, cfg)
    except NoSolution as exc:
        if exc.report is not None:
            sys.stdout.write(render_report(exc.report, args.format))
        print(f"peer-split: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except VALIDATION_ERRORS as exc:
        print(f"peer-split: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    sys.stdout.write(render_report(report, args.format))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
