from __future__ import annotations

import logging
import sys
from pathlib import Path

from . import config

LOGGER = logging.getLogger("qtheta")
_LOGGER_INITIALISED = False


def _configure_logger(log_path: Path | None) -> None:
    """Configure the shared logger: stderr always, ``log_path`` when given."""

    global _LOGGER_INITIALISED

    for handler in list(LOGGER.handlers):
        LOGGER.removeHandler(handler)
        try:
            handler.close()
        except Exception:  # noqa: BLE001
            continue

    formatter = logging.Formatter(
        fmt="[%(asctime)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    # stdout carries reports and series dumps
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    LOGGER.addHandler(stream_handler)

    if log_path is not None:
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path, encoding="utf-8")
        file_handler.setFormatter(formatter)
        LOGGER.addHandler(file_handler)

    LOGGER.setLevel(logging.INFO)
    LOGGER.propagate = False
    _LOGGER_INITIALISED = True


def _ensure_logger() -> None:
    if _LOGGER_INITIALISED:
        return
    _configure_logger(config.LOG_FILE)


def set_verbosity(verbose: bool) -> None:
    """Switch between INFO (verbose) and WARNING (quiet) logging."""

    _ensure_logger()
    LOGGER.setLevel(logging.INFO if verbose else logging.WARNING)


def log_line(message: str) -> None:
    """Write a timestamped log line to stderr and the optional log file."""

    _ensure_logger()
    LOGGER.info(message)
