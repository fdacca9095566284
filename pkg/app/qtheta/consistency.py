"""Dual-path oracle: windowed stated forms against exact normal forms.

The exact path evaluates the rewritten normal form of each side.  The windowed
path evaluates ``multiplier * stated side`` with only its square-root pairs
merged, expanding non-unit inverses as series in the variables
(``1/(1-x) = sum x^k``) and truncating every variable exponent to
``[-W, W]``.  Truncation can only disturb terms near the window edge, so both
paths are compared on the trusted window ``|exp| <= W - N - 2``.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Dict, List, Tuple

from . import config
from .catalog import SIDES, Identity
from .errors import QThetaError, WindowTooSmall
from .expr import eval_expr
from .laurent import LaurentPoly, format_poly, terms_add_into
from .logging_utils import _qtheta_event
from .registry import Catalog, evaluate_side, get_identity
from .reports import MODE_ORACLE, STATUS_ERROR, STATUS_MISMATCH, STATUS_PASS, Report, ReportError
from .rewrite import pair_all_roots
from .series import MismatchRecord, QSeries, restrict_window


class PathIssueType(str, Enum):
    PATH_MISMATCH = "path_mismatch"
    SIDES_DISAGREE = "sides_disagree"


@dataclass
class PathDiff:
    """First coefficient where two evaluations disagree on the trusted window."""

    side: str
    issue_type: PathIssueType
    q_exp: int
    diff: str
    details: str


def trusted_window(order: int, window: int) -> int:
    return window - order - 2


def check_window(order: int, window: int) -> None:
    required = config.minimum_window(order)
    if window < required:
        raise WindowTooSmall(f"window {window} is too small for order {order}; need at least {required}")


def _first_difference(a: QSeries, b: QSeries, window: int, order: int) -> MismatchRecord | None:
    left = restrict_window(a, window)
    right = restrict_window(b, window)
    for e in sorted(set(left) | set(right)):
        if e > order:
            break
        diff = dict(left.get(e, {}))
        terms_add_into(diff, right.get(e, {}), -1)
        if diff:
            return MismatchRecord(e, LaurentPoly(diff, a.arity))
    return None


def _windowed_side(ident: Identity, side: str, order: int, window: int) -> QSeries:
    node = pair_all_roots(ident.oracle_lhs if side == "lhs" else ident.oracle_rhs)
    try:
        return eval_expr(node, order, window=window)
    except QThetaError as exc:
        exc.path = f"stated-{side}{exc.path or ''}"
        raise


def _compare(ident: Identity, order: int, window: int) -> List[Tuple[PathDiff, MismatchRecord]]:
    check_window(order, window)
    T = trusted_window(order, window)
    found: List[Tuple[PathDiff, MismatchRecord]] = []
    windowed: Dict[str, QSeries] = {}
    for side in SIDES:
        exact = evaluate_side(ident, side, order)
        windowed[side] = _windowed_side(ident, side, order, window)
        record = _first_difference(windowed[side], exact, T, order)
        if record is not None:
            issue = PathDiff(
                side,
                PathIssueType.PATH_MISMATCH,
                record.q_exp,
                format_poly(record.diff),
                f"windowed stated {side} differs from the exact normal form",
            )
            found.append((issue, record))
    record = _first_difference(windowed["lhs"], windowed["rhs"], T, order)
    if record is not None:
        issue = PathDiff("both", PathIssueType.SIDES_DISAGREE, record.q_exp, format_poly(record.diff), "windowed stated sides differ")
        found.append((issue, record))
    _qtheta_event("oracle", id=ident.id, order=order, window=window, trusted=T, diffs=len(found))
    return found


def compare_paths(ident: Identity, order: int, window: int) -> Dict[str, Any]:
    """Compare exact and windowed evaluations of both sides of ``ident``."""

    found = _compare(ident, order, window)
    return {
        "ok": not found,
        "id": ident.id,
        "order": order,
        "window": window,
        "trusted_window": trusted_window(order, window),
        "diffs": [asdict(issue) for issue, _ in found],
    }


def oracle_identity(
    identity: Identity | str,
    order: int | None = None,
    window: int | None = None,
    *,
    catalog: Catalog | None = None,
) -> Report:
    """Run the dual-path comparison and wrap the first divergence as a report."""

    ident = identity if isinstance(identity, Identity) else get_identity(identity, catalog)
    N = config.resolve_order(order, ident.default_order)
    W = window if window is not None else config.minimum_window(N)
    check_window(N, W)
    started = time.perf_counter()
    try:
        found = _compare(ident, N, W)
    except QThetaError as exc:
        elapsed = int((time.perf_counter() - started) * 1000)
        return Report(
            ident.id, N, STATUS_ERROR, elapsed_ms=elapsed, error=ReportError.from_exception(exc), mode=MODE_ORACLE, window=W
        )
    elapsed = int((time.perf_counter() - started) * 1000)
    if not found:
        return Report(ident.id, N, STATUS_PASS, elapsed_ms=elapsed, mode=MODE_ORACLE, window=W)
    issue, record = found[0]
    return Report(
        ident.id,
        N,
        STATUS_MISMATCH,
        mismatch=record,
        elapsed_ms=elapsed,
        mode=MODE_ORACLE,
        window=W,
        detail=f"{issue.issue_type.value}: {issue.details}",
    )


__all__ = [
    "PathIssueType",
    "PathDiff",
    "trusted_window",
    "check_window",
    "compare_paths",
    "oracle_identity",
]
