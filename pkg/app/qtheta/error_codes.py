from __future__ import annotations

"""Centralised error code taxonomy for engine failures.

These codes are included in reports, structured logs and JSON output so that a
failed check explains itself. They are stable identifiers for consumers of the
JSON report format.
"""


class ErrorCode:
    USAGE = "usage_error"
    ARITY_MISMATCH = "arity_mismatch"
    NOT_A_UNIT = "not_a_unit"
    ORDER_EXCEEDED = "order_exceeded"
    NON_EVALUABLE = "non_evaluable"
    DIVERGENT_BOUND = "divergent_bound"
    UNSOUND_TRUNCATION = "unsound_truncation"
    UNKNOWN_IDENTITY = "unknown_identity"
    WINDOW_TOO_SMALL = "window_too_small"
    DEFINITION_INVALID = "definition_invalid"
    INTERNAL = "internal_error"


# Codes that signal a caller mistake rather than an evaluation failure.
USAGE_ERROR_CODES = {
    ErrorCode.USAGE,
    ErrorCode.ARITY_MISMATCH,
    ErrorCode.UNKNOWN_IDENTITY,
    ErrorCode.WINDOW_TOO_SMALL,
    ErrorCode.DEFINITION_INVALID,
}


__all__ = ["ErrorCode", "USAGE_ERROR_CODES"]
