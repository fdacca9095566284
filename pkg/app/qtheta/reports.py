"""Check reports and their JSON/text renderings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Sequence

from . import config
from .error_codes import USAGE_ERROR_CODES
from .errors import QThetaError, UsageError
from .laurent import format_poly, parse_laurent
from .series import MismatchRecord

STATUS_PASS = "pass"
STATUS_MISMATCH = "mismatch"
STATUS_ERROR = "error"
STATUSES = (STATUS_PASS, STATUS_MISMATCH, STATUS_ERROR)

MODE_EXACT = "exact"
MODE_ORACLE = "oracle"

EXIT_PASS = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


@dataclass(frozen=True)
class ReportError:
    error_code: str
    message: str
    path: str | None = None

    @classmethod
    def from_exception(cls, exc: QThetaError) -> "ReportError":
        message = str(exc.args[0]) if exc.args else exc.error_code
        return cls(exc.error_code, message, exc.path)


@dataclass
class Report:
    id: str
    order: int
    status: str
    mismatch: MismatchRecord | None = None
    n_max_used: Dict[str, int] = field(default_factory=dict)
    elapsed_ms: int = field(default=0, compare=False)
    error: ReportError | None = None
    mode: str = MODE_EXACT
    window: int | None = None
    detail: str | None = None

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise UsageError(f"unknown report status {self.status!r}")
        if (self.status == STATUS_MISMATCH) != (self.mismatch is not None):
            raise UsageError("a report carries a mismatch record exactly when its status is 'mismatch'")

    @property
    def ok(self) -> bool:
        return self.status == STATUS_PASS


def report_to_dict(report: Report) -> Dict[str, Any]:
    mismatch = None
    if report.mismatch is not None:
        mismatch = {"q_exp": report.mismatch.q_exp, "diff": format_poly(report.mismatch.diff)}
    error = None
    if report.error is not None:
        error = {"error_code": report.error.error_code, "message": report.error.message, "path": report.error.path}
    return {
        "id": report.id,
        "order": report.order,
        "status": report.status,
        "mode": report.mode,
        "window": report.window,
        "mismatch": mismatch,
        "n_max_used": dict(sorted(report.n_max_used.items())),
        "elapsed_ms": report.elapsed_ms,
        "error": error,
        "detail": report.detail,
    }


def report_from_dict(payload: Dict[str, Any]) -> Report:
    try:
        mismatch = None
        raw_mismatch = payload.get("mismatch")
        if raw_mismatch is not None:
            mismatch = MismatchRecord(int(raw_mismatch["q_exp"]), parse_laurent(raw_mismatch["diff"]))
        error = None
        raw_error = payload.get("error")
        if raw_error is not None:
            error = ReportError(raw_error["error_code"], raw_error["message"], raw_error.get("path"))
        return Report(
            id=payload["id"],
            order=int(payload["order"]),
            status=payload["status"],
            mismatch=mismatch,
            n_max_used={str(k): int(v) for k, v in (payload.get("n_max_used") or {}).items()},
            elapsed_ms=int(payload.get("elapsed_ms", 0)),
            error=error,
            mode=payload.get("mode", MODE_EXACT),
            window=payload.get("window"),
            detail=payload.get("detail"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed report payload: {exc}") from exc


def render_json(reports: Sequence[Report]) -> str:
    body = {"schema": config.REPORT_SCHEMA_VERSION, "reports": [report_to_dict(r) for r in reports]}
    return json.dumps(body, indent=2, sort_keys=True)


def parse_reports_json(text: str) -> List[Report]:
    payload = json.loads(text)
    schema = payload.get("schema")
    if schema != config.REPORT_SCHEMA_VERSION:
        raise UsageError(f"unsupported report schema {schema!r}")
    return [report_from_dict(item) for item in payload.get("reports", [])]


def render_text_line(report: Report) -> str:
    head = f"{report.id:<24} order={report.order:<3} {report.status.upper():<8} {report.elapsed_ms} ms"
    if report.mode != MODE_EXACT:
        head += f"  [{report.mode} W={report.window}]"
    if report.mismatch is not None:
        head += f"\n    first difference at q^{report.mismatch.q_exp}: {format_poly(report.mismatch.diff)}"
    if report.detail:
        head += f"\n    {report.detail}"
    if report.error is not None:
        where = f" (at {report.error.path})" if report.error.path else ""
        head += f"\n    [{report.error.error_code}] {report.error.message}{where}"
    return head


def render_text(reports: Sequence[Report]) -> str:
    lines = [render_text_line(r) for r in reports]
    counts = summarize(reports)
    lines.append(
        f"{len(reports)} checked: {counts[STATUS_PASS]} passed, "
        f"{counts[STATUS_MISMATCH]} mismatched, {counts[STATUS_ERROR]} errors"
    )
    return "\n".join(lines)


def summarize(reports: Iterable[Report]) -> Dict[str, int]:
    counts = {status: 0 for status in STATUSES}
    for r in reports:
        counts[r.status] += 1
    return counts


def exit_code(reports: Iterable[Report]) -> int:
    """Evaluation errors outrank usage errors, which outrank mismatches."""

    code = EXIT_PASS
    for r in reports:
        if r.status == STATUS_ERROR:
            if r.error is not None and r.error.error_code in USAGE_ERROR_CODES:
                code = max(code, EXIT_USAGE)
            else:
                code = EXIT_INTERNAL
        elif r.status == STATUS_MISMATCH:
            code = max(code, EXIT_MISMATCH)
    return code


__all__ = [
    "Report",
    "ReportError",
    "STATUS_PASS",
    "STATUS_MISMATCH",
    "STATUS_ERROR",
    "MODE_EXACT",
    "MODE_ORACLE",
    "EXIT_PASS",
    "EXIT_MISMATCH",
    "EXIT_USAGE",
    "EXIT_INTERNAL",
    "report_to_dict",
    "report_from_dict",
    "render_json",
    "parse_reports_json",
    "render_text",
    "render_text_line",
    "summarize",
    "exit_code",
]
