import json

import pytest

from app.qtheta.error_codes import ErrorCode
from app.qtheta.errors import UsageError
from app.qtheta.laurent import parse_laurent
from app.qtheta.reports import (
    EXIT_INTERNAL,
    EXIT_MISMATCH,
    EXIT_PASS,
    EXIT_USAGE,
    MODE_ORACLE,
    STATUS_ERROR,
    STATUS_MISMATCH,
    STATUS_PASS,
    Report,
    ReportError,
    exit_code,
    parse_reports_json,
    render_json,
    render_text,
    render_text_line,
    summarize,
)
from app.qtheta.series import MismatchRecord


def _mismatch(report_id: str = "bad") -> Report:
    return Report(report_id, 6, STATUS_MISMATCH, mismatch=MismatchRecord(3, parse_laurent("-x + 1/2*y^-1")))


def _error(code: str) -> Report:
    return Report("err", 6, STATUS_ERROR, error=ReportError(code, "boom", "lhs/inv"))


def test_mismatch_record_required_exactly_for_mismatches() -> None:
    with pytest.raises(UsageError):
        Report("a", 3, STATUS_MISMATCH)
    with pytest.raises(UsageError):
        Report("a", 3, STATUS_PASS, mismatch=MismatchRecord(0, parse_laurent("x")))
    with pytest.raises(UsageError):
        Report("a", 3, "unknown")


def test_json_round_trip() -> None:
    reports = [
        Report("ok", 10, STATUS_PASS, n_max_used={"theta": 4}, elapsed_ms=12),
        _mismatch(),
        _error(ErrorCode.NOT_A_UNIT),
        Report("orc", 4, STATUS_PASS, mode=MODE_ORACLE, window=12),
    ]

    text = render_json(reports)

    payload = json.loads(text)
    assert payload["schema"] == 1
    assert payload["reports"][1]["mismatch"] == {"q_exp": 3, "diff": "1/2*y^-1 - x"}
    assert parse_reports_json(text) == reports


def test_unknown_schema_version_is_rejected() -> None:
    with pytest.raises(UsageError):
        parse_reports_json(json.dumps({"schema": 99, "reports": []}))
    with pytest.raises(UsageError):
        parse_reports_json(json.dumps({"schema": 1, "reports": [{"id": "a"}]}))


def test_text_rendering() -> None:
    line = render_text_line(_mismatch())

    assert line.splitlines()[0].split()[:3] == ["bad", "order=6", "MISMATCH"]
    assert "first difference at q^3: 1/2*y^-1 - x" in line
    assert "[not_a_unit] boom (at lhs/inv)" in render_text_line(_error(ErrorCode.NOT_A_UNIT))

    summary = render_text([Report("ok", 1, STATUS_PASS), _mismatch()]).splitlines()[-1]
    assert summary == "2 checked: 1 passed, 1 mismatched, 0 errors"


def test_summarize_counts_statuses() -> None:
    counts = summarize([Report("a", 1, STATUS_PASS), _mismatch(), _mismatch("b")])

    assert counts == {STATUS_PASS: 1, STATUS_MISMATCH: 2, STATUS_ERROR: 0}


@pytest.mark.parametrize(
    ("reports", "expected"),
    [
        ([], EXIT_PASS),
        ([Report("a", 1, STATUS_PASS)], EXIT_PASS),
        ([_mismatch()], EXIT_MISMATCH),
        ([_mismatch(), _error(ErrorCode.WINDOW_TOO_SMALL)], EXIT_USAGE),
        ([_error(ErrorCode.NON_EVALUABLE), _error(ErrorCode.USAGE)], EXIT_INTERNAL),
        ([_error(ErrorCode.USAGE), _error(ErrorCode.DIVERGENT_BOUND), _mismatch()], EXIT_INTERNAL),
    ],
)
def test_exit_code_precedence(reports, expected: int) -> None:
    assert exit_code(reports) == expected
