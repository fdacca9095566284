"""Configuration constants for the q-series verification engine."""
from __future__ import annotations

import os
from pathlib import Path

DATA_DIR: Path = Path(os.getenv("QTHETA_DATA_DIR", ".qtheta"))
RUNS_DIR: Path = DATA_DIR / "runs"
EXPORTS_DIR: Path = DATA_DIR / "exports"

_LOG_FILE_ENV = os.getenv("QTHETA_LOG_FILE", "").strip()
# Optional; logging goes to stderr only when unset.
LOG_FILE: Path | None = Path(_LOG_FILE_ENV) if _LOG_FILE_ENV else None

ORDER_ENV: str = "QTHETA_ORDER"

DEFAULT_ORDER: int = int(os.getenv("QTHETA_DEFAULT_ORDER", "40"))
# Specialized transformation identities grow faster in term count.
SPECIALIZED_ORDER: int = int(os.getenv("QTHETA_SPECIALIZED_ORDER", "24"))

# Oracle window must satisfy W >= 2N + WINDOW_MARGIN.
WINDOW_MARGIN: int = int(os.getenv("QTHETA_WINDOW_MARGIN", "4"))

MAX_JOBS: int = int(os.getenv("QTHETA_JOBS", str(os.cpu_count() or 1)))
MAX_EXPORTS: int = int(os.getenv("QTHETA_EXPORTS_KEEP_MAX", "5"))

REPORT_SCHEMA_VERSION: int = 1
DEFINITIONS_SCHEMA_VERSION: int = 1
SCHEMA_DIR: Path = Path(__file__).resolve().parent / "schema"


def env_order() -> int | None:
    """Return the order requested through ``QTHETA_ORDER``, if any."""

    raw = os.getenv(ORDER_ENV, "").strip()
    if not raw:
        return None
    return int(raw)


def resolve_order(flag: int | None, identity_default: int) -> int:
    """Return the verification order: flag > ``QTHETA_ORDER`` > identity default."""

    if flag is not None:
        return flag
    from_env = env_order()
    if from_env is not None:
        return from_env
    return identity_default


def minimum_window(order: int) -> int:
    """Smallest admissible oracle window for ``order``."""

    return 2 * order + WINDOW_MARGIN
