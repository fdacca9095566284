"""Command-line front end: ``list``, ``check``, ``expand`` and ``oracle``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Sequence

from . import config
from .batch_executor import CheckExecutor, CheckTask
from .catalog import SIDES
from .config_validation import validate_runtime_config
from .consistency import check_window
from .error_codes import USAGE_ERROR_CODES
from .errors import QThetaError, UsageError
from .expr import Expr, eval_expr, validate_evaluable
from .expr_json import parse_expr
from .laurent import format_terms
from .logging_utils import _qtheta_event
from .registry import Catalog, get_identity, list_identities, load_catalog, resolve_ids
from .reports import (
    EXIT_INTERNAL,
    EXIT_USAGE,
    MODE_EXACT,
    MODE_ORACLE,
    Report,
    exit_code,
    render_json,
    render_text,
    render_text_line,
    summarize,
)
from .rewrite import rewrite_normalize
from .series import QSeries, format_series
from .telemetry import RunTelemetry
from .utils import log_line, set_verbosity

FORMATS = ("text", "json")


def _positive_int(value: str) -> int:
    try:
        parsed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from None
    if parsed < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {parsed}")
    return parsed


def _build_parser() -> argparse.ArgumentParser:
    """Return the argument parser for all subcommands."""

    parser = argparse.ArgumentParser(
        prog="qtheta",
        description="Verify q-series identities by exact truncated expansion.",
    )
    parser.add_argument("--verbose", action="store_true", help="Log progress lines to stderr.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=FORMATS, default="text")
        p.add_argument("--definitions", default=None, help="JSON file with extra identity definitions.")

    p_list = sub.add_parser("list", help="List catalog identities.")
    common(p_list)
    p_list.add_argument("--filter", default=None, help="Only identities whose id or title contains this text.")

    for name, help_text in (
        ("check", "Check identities exactly to a q-order."),
        ("oracle", "Cross-check exact and windowed evaluation paths."),
    ):
        p = sub.add_parser(name, help=help_text)
        common(p)
        p.add_argument("ids", nargs="*", help="Identity ids, or 'all'.")
        p.add_argument("--ids", dest="ids_flag", default=None, help="Comma-separated ids, or 'all'.")
        p.add_argument("--order", type=_positive_int, default=None)
        p.add_argument("--jobs", type=_positive_int, default=None)
        p.add_argument("--excel", default=None, help="Write the run to this Excel workbook.")
        p.add_argument("--no-telemetry", action="store_true", help="Do not record run telemetry.")
        if name == "oracle":
            p.add_argument("--window", type=_positive_int, default=None)

    p_expand = sub.add_parser("expand", help="Print the q-expansion of an expression or identity side.")
    common(p_expand)
    p_expand.add_argument("expr", help="Inline JSON expression, or <id>.lhs / <id>.rhs.")
    p_expand.add_argument("--order", type=_positive_int, default=None)
    p_expand.add_argument("--raw", action="store_true", help="Evaluate without rewriting to normal form.")
    p_expand.add_argument("--cleared", action="store_true", help="Expand the checked (cleared) form of an identity side.")
    return parser


def _fail(error: QThetaError | ValueError) -> int:
    code = getattr(error, "error_code", None)
    print(f"error: {error}", file=sys.stderr)
    return EXIT_USAGE if code is None or code in USAGE_ERROR_CODES else EXIT_INTERNAL


def cmd_list(args: argparse.Namespace, catalog: Catalog) -> int:
    rows = list_identities(catalog, filter_text=args.filter)
    if args.format == "json":
        print(json.dumps(rows, indent=2))
        return 0
    for row in rows:
        print(f"{row['id']:<24} {row['default_order']:>4}  {row['provenance']:<14} {row['title']}  [{row['paper_eq'] or row['reference']}]")
    print(f"{len(rows)} identities")
    return 0


def _selection(args: argparse.Namespace) -> List[str]:
    selection: List[str] = list(args.ids)
    if args.ids_flag:
        selection.append(args.ids_flag)
    return selection


def _run_batch(args: argparse.Namespace, catalog: Catalog, mode: str) -> int:
    ids = resolve_ids(_selection(args) or None, catalog)
    tasks: List[CheckTask] = []
    for ident_id in ids:
        ident = catalog[ident_id]
        window = None
        if mode == MODE_ORACLE:
            order = config.resolve_order(args.order, ident.default_order)
            window = args.window if args.window is not None else config.minimum_window(order)
            check_window(order, window)
        tasks.append(CheckTask(ident, args.order, mode, window))

    jobs = args.jobs if args.jobs is not None else config.MAX_JOBS
    telemetry = None if args.no_telemetry else RunTelemetry(mode)
    reports: List[Report] = []
    with CheckExecutor(jobs) as executor:
        for report in executor.iter_run(tasks):
            reports.append(report)
            if telemetry is not None:
                telemetry.add(report)
            if args.format == "text":
                print(render_text_line(report), flush=True)

    if args.format == "json":
        print(render_json(reports))
    else:
        print(render_text(reports).splitlines()[-1])

    run_path = None
    if telemetry is not None:
        try:
            run_path = telemetry.finalize({"ids": ids, "jobs": jobs})
        except OSError as exc:
            log_line(f"[TELEMETRY] Unable to write run telemetry: {exc}")
    if args.excel:
        from .export_excel import export_run_to_excel

        if run_path is None:
            print("error: --excel needs run telemetry", file=sys.stderr)
            return EXIT_USAGE
        dest = export_run_to_excel(run_path, args.excel)
        log_line(f"[EXPORT] wrote {dest}")

    _qtheta_event("run", mode=mode, **summarize(reports))
    return exit_code(reports)


def cmd_check(args: argparse.Namespace, catalog: Catalog) -> int:
    return _run_batch(args, catalog, MODE_EXACT)


def cmd_oracle(args: argparse.Namespace, catalog: Catalog) -> int:
    return _run_batch(args, catalog, MODE_ORACLE)


def _expand_target(args: argparse.Namespace, catalog: Catalog) -> tuple[Expr, int]:
    text = args.expr.strip()
    if text.startswith("{"):
        node = parse_expr(text)
        order = config.resolve_order(args.order, config.DEFAULT_ORDER)
        return (node if args.raw else rewrite_normalize(node)), order
    ident_id, _, side = text.rpartition(".")
    if not ident_id or side not in SIDES:
        raise UsageError(f"expected <id>.lhs or <id>.rhs, got {text!r}")
    ident = get_identity(ident_id, catalog)
    order = config.resolve_order(args.order, ident.default_order)
    if args.cleared:
        return ident.side(side), order
    node = ident.stated_side(side)
    if ident.normalize and not args.raw:
        node = rewrite_normalize(node)
    return node, order


def _series_payload(series: QSeries) -> dict:
    return {
        "schema": config.REPORT_SCHEMA_VERSION,
        "order": series.order,
        "lo": series.lo,
        "base_div": series.base_div,
        "coefficients": {str(e): format_terms(t, series.arity) for e, t in sorted(series.raw.items())},
    }


def cmd_expand(args: argparse.Namespace, catalog: Catalog) -> int:
    node, order = _expand_target(args, catalog)
    validation = validate_evaluable(node)
    if not validation.ok:
        print(f"error: [{validation.error_code}] {validation.message} (at {validation.path})", file=sys.stderr)
        return EXIT_INTERNAL
    series = eval_expr(node, order)
    if args.format == "json":
        print(json.dumps(_series_payload(series), indent=2))
    else:
        print(format_series(series))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point for the qtheta CLI."""

    parser = _build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    set_verbosity(args.verbose)

    try:
        validate_runtime_config("cli")
    except ValueError as exc:
        return _fail(exc)

    try:
        catalog = load_catalog(args.definitions)
        if args.command == "list":
            return cmd_list(args, catalog)
        if args.command == "expand":
            return cmd_expand(args, catalog)
        if args.command == "oracle":
            return cmd_oracle(args, catalog)
        return cmd_check(args, catalog)
    except QThetaError as exc:
        return _fail(exc)


if __name__ == "__main__":  # pragma: no cover - CLI entry
    raise SystemExit(main())
