from __future__ import annotations

from concurrent.futures import Future, ProcessPoolExecutor
from dataclasses import dataclass
from threading import Lock
from typing import Iterator, List, Optional, Sequence

from .catalog import Identity
from .error_codes import ErrorCode
from .errors import QThetaError
from .logging_utils import _qtheta_event
from .reports import MODE_EXACT, MODE_ORACLE, STATUS_ERROR, Report, ReportError


@dataclass(frozen=True)
class CheckTask:
    identity: Identity
    order: int | None = None
    mode: str = MODE_EXACT
    window: int | None = None


def run_task(task: CheckTask) -> Report:
    """Run one exact check or oracle comparison; never raises."""

    from .consistency import oracle_identity
    from .registry import check_identity

    try:
        if task.mode == MODE_ORACLE:
            return oracle_identity(task.identity, task.order, task.window)
        return check_identity(task.identity, task.order)
    except QThetaError as exc:
        error = ReportError.from_exception(exc)
    except Exception as exc:  # noqa: BLE001
        error = ReportError(ErrorCode.INTERNAL, f"{type(exc).__name__}: {exc}")
    order = task.order if task.order is not None else task.identity.default_order
    return Report(task.identity.id, order, STATUS_ERROR, error=error, mode=task.mode, window=task.window)


class CheckExecutor:
    """
    Fans identity checks out to worker processes.

    - max_workers=1 runs every task inline, in order.
    - Workers share nothing but the pickled identities they are handed.
    - Results come back in input order regardless of completion order.
    """

    def __init__(self, max_workers: int) -> None:
        self._max_workers = max(1, max_workers)
        self._executor: Optional[ProcessPoolExecutor] = (
            ProcessPoolExecutor(max_workers=self._max_workers) if self._max_workers > 1 else None
        )
        self._lock = Lock()
        self._in_flight: int = 0
        self._peak_in_flight: int = 0

    def _done(self, _future: Future) -> None:
        with self._lock:
            self._in_flight -= 1

    def iter_run(self, tasks: Sequence[CheckTask]) -> Iterator[Report]:
        """Yield reports in input order as soon as each one is available."""

        _qtheta_event("state", phase="check_executor", kind="start", tasks=len(tasks), max_workers=self._max_workers)
        if self._executor is None or len(tasks) <= 1:
            for task in tasks:
                yield run_task(task)
            return

        futures: List[Future[Report]] = []
        for task in tasks:
            with self._lock:
                self._in_flight += 1
                self._peak_in_flight = max(self._peak_in_flight, self._in_flight)
            future = self._executor.submit(run_task, task)
            future.add_done_callback(self._done)
            futures.append(future)
        for future in futures:
            yield future.result()

    def run(self, tasks: Sequence[CheckTask]) -> List[Report]:
        return list(self.iter_run(tasks))

    @property
    def max_workers(self) -> int:
        return self._max_workers

    @property
    def peak_in_flight(self) -> int:
        with self._lock:
            return self._peak_in_flight

    def shutdown(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)
        _qtheta_event(
            "state",
            phase="check_executor",
            kind="summary",
            peak_in_flight=self.peak_in_flight,
            max_workers=self._max_workers,
        )

    def __enter__(self) -> "CheckExecutor":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.shutdown()


__all__ = ["CheckTask", "CheckExecutor", "run_task"]
