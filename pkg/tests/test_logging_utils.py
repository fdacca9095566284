from fractions import Fraction

import pytest

from app.qtheta import logging_utils
from app.qtheta.consistency import PathIssueType
from app.qtheta.registry import check_identity


@pytest.fixture
def events(monkeypatch: pytest.MonkeyPatch) -> list:
    lines: list[str] = []
    monkeypatch.setattr(logging_utils, "log_line", lambda msg: lines.append(msg))
    return lines


def test_qtheta_event_label_and_phase(events: list) -> None:
    logging_utils._qtheta_event("state", phase="check_executor", kind="summary")

    assert events == ["[QTHETA][STATE] phase='check_executor', kind='summary'"]


def test_phase_becomes_the_tag_without_a_label(events: list) -> None:
    logging_utils._qtheta_event(phase="oracle", order=4, id="jtp")

    assert events == ["[QTHETA][ORACLE] id='jtp', order=4"]


def test_values_render_in_their_domain_form() -> None:
    line = logging_utils.format_event(
        "oracle", {"diff": Fraction(-1, 2), "issue": PathIssueType.SIDES_DISAGREE, "window": 12}
    )

    assert line == "[QTHETA][ORACLE] diff=-1/2, issue='sides_disagree', window=12"


def test_timed_event_brackets_the_block(events: list) -> None:
    with logging_utils.timed_event("check", id="jtp", order=4) as span:
        span.note(status="pass")

    assert events[0] == "[QTHETA][CHECK] id='jtp', phase='start', order=4"
    assert events[1].startswith("[QTHETA][CHECK] id='jtp', phase='end', elapsed_ms=")
    assert events[1].endswith("order=4, status='pass'")


def test_timed_event_closes_on_errors(events: list) -> None:
    with pytest.raises(ZeroDivisionError):
        with logging_utils.timed_event("sum", id="jtp"):
            1 / 0

    assert [line.split(",")[1].strip() for line in events] == ["phase='start'", "phase='end'"]


def test_identity_checks_log_their_outcome(events: list) -> None:
    check_identity("gauss-sum", 3)

    checks = [line for line in events if line.startswith("[QTHETA][CHECK]")]
    assert checks[0] == "[QTHETA][CHECK] id='gauss-sum', phase='start', order=3"
    assert checks[-1].endswith("order=3, status='pass'")


def test_logging_failures_are_swallowed(monkeypatch: pytest.MonkeyPatch) -> None:
    def _broken(_msg):  # noqa: ANN001
        raise OSError("disk full")

    monkeypatch.setattr(logging_utils, "log_line", _broken)

    logging_utils._qtheta_event("check", id="jtp")
