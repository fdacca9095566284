from __future__ import annotations

from typing import Literal

from . import config
from .logging_utils import _qtheta_event
from .utils import log_line

Entrypoint = Literal["cli", "tests", "library"]


def _raise_config_error(message: str, *, entrypoint: Entrypoint, error: str) -> None:
    _qtheta_event(
        "error",
        phase="config",
        context="runtime_validation",
        error=error,
        entrypoint=entrypoint,
    )
    log_line(f"[CONFIG] {message} (entrypoint={entrypoint})")
    raise ValueError(message)


def validate_runtime_config(entrypoint: Entrypoint) -> None:
    """Validate runtime configuration for the given entrypoint.

    Raises ``ValueError`` when a blocking misconfiguration is detected.
    Non-fatal adjustments (clamping the worker count) are logged but do not
    raise.
    """

    try:
        order = config.env_order()
    except ValueError:
        _raise_config_error(
            f"{config.ORDER_ENV} must be an integer.",
            entrypoint=entrypoint,
            error="order_not_integer",
        )
        return
    if order is not None and order < 1:
        _raise_config_error(
            f"{config.ORDER_ENV} must be at least 1.",
            entrypoint=entrypoint,
            error="order_invalid",
        )

    for field_name, value in (
        ("DEFAULT_ORDER", config.DEFAULT_ORDER),
        ("SPECIALIZED_ORDER", config.SPECIALIZED_ORDER),
    ):
        if value < 1:
            _raise_config_error(
                f"{field_name} must be at least 1.",
                entrypoint=entrypoint,
                error="order_invalid",
            )

    if config.WINDOW_MARGIN < 0:
        _raise_config_error(
            "WINDOW_MARGIN must be non-negative.",
            entrypoint=entrypoint,
            error="window_margin_invalid",
        )

    if config.MAX_JOBS < 1:
        adjusted = 1
        _qtheta_event(
            "state",
            phase="config",
            context="runtime_validation",
            kind="config_adjustment",
            field="MAX_JOBS",
            value=config.MAX_JOBS,
            adjusted=adjusted,
            entrypoint=entrypoint,
        )
        log_line("[CONFIG] MAX_JOBS < 1; clamping to 1.")
        config.MAX_JOBS = adjusted


__all__ = ["validate_runtime_config", "Entrypoint"]
