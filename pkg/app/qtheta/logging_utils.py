"""Structured ``[QTHETA][LABEL] key=value`` progress lines."""
from __future__ import annotations

import time
from contextlib import contextmanager
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterator

from .utils import log_line

TAG = "QTHETA"
# the subject of a line comes first so `grep id=` lines up
LEADING_FIELDS = ("id", "phase")


def _render(value: Any) -> str:
    if isinstance(value, Enum):
        return repr(value.value)
    if isinstance(value, Fraction):
        return str(value)
    return repr(value)


def format_event(label: str, fields: Dict[str, Any]) -> str:
    lead = [k for k in LEADING_FIELDS if k in fields]
    rest = sorted(k for k in fields if k not in LEADING_FIELDS)
    payload = ", ".join(f"{k}={_render(fields[k])}" for k in lead + rest)
    return f"[{TAG}][{label.upper()}] {payload}".rstrip()


def _qtheta_event(label: str = "", *, phase: str | None = None, **fields: Any) -> None:
    """Log one event line; without a ``label`` the ``phase`` names the tag."""

    if phase and label:
        fields["phase"] = phase
    try:
        log_line(format_event(label or phase or "", fields))
    except Exception:  # noqa: BLE001
        return


class EventSpan:
    """Fields collected for the closing line of :func:`timed_event`."""

    def __init__(self) -> None:
        self.fields: Dict[str, Any] = {}
        self._started = time.perf_counter()

    def note(self, **fields: Any) -> None:
        self.fields.update(fields)

    def elapsed_ms(self) -> int:
        return int((time.perf_counter() - self._started) * 1000)


@contextmanager
def timed_event(label: str, **fields: Any) -> Iterator[EventSpan]:
    """Bracket a block with ``phase='start'`` and ``phase='end'`` lines.

    The end line repeats ``fields``, adds whatever the block passed to
    :meth:`EventSpan.note` and always carries ``elapsed_ms``.
    """

    _qtheta_event(label, phase="start", **fields)
    span = EventSpan()
    try:
        yield span
    finally:
        _qtheta_event(label, phase="end", **{**fields, **span.fields, "elapsed_ms": span.elapsed_ms()})


__all__ = ["_qtheta_event", "timed_event", "EventSpan", "format_event"]
