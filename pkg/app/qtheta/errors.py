from __future__ import annotations

from .error_codes import ErrorCode


class QThetaError(Exception):
    """Base error carrying a stable ``error_code`` and an optional AST path."""

    default_code = ErrorCode.INTERNAL

    def __init__(self, message: str, *, error_code: str | None = None, path: str | None = None) -> None:
        super().__init__(message)
        self.error_code = error_code or self.default_code
        self.path = path

    def with_path(self, path: str) -> "QThetaError":
        if self.path is None:
            self.path = path
        return self

    def __str__(self) -> str:
        message = str(self.args[0]) if self.args else ""
        if self.path:
            return f"{message} (at {self.path})"
        return message


class UsageError(QThetaError):
    default_code = ErrorCode.USAGE


class ArityError(UsageError):
    default_code = ErrorCode.ARITY_MISMATCH


class UnknownIdentity(UsageError):
    default_code = ErrorCode.UNKNOWN_IDENTITY


class WindowTooSmall(UsageError):
    default_code = ErrorCode.WINDOW_TOO_SMALL


class DefinitionError(UsageError):
    default_code = ErrorCode.DEFINITION_INVALID


class NotAUnit(QThetaError):
    default_code = ErrorCode.NOT_A_UNIT


class OrderExceeded(QThetaError):
    default_code = ErrorCode.ORDER_EXCEEDED


class NonEvaluable(QThetaError):
    default_code = ErrorCode.NON_EVALUABLE


class DivergentBound(QThetaError):
    default_code = ErrorCode.DIVERGENT_BOUND


class UnsoundTruncation(QThetaError):
    default_code = ErrorCode.UNSOUND_TRUNCATION


__all__ = [
    "QThetaError",
    "UsageError",
    "ArityError",
    "UnknownIdentity",
    "WindowTooSmall",
    "DefinitionError",
    "NotAUnit",
    "OrderExceeded",
    "NonEvaluable",
    "DivergentBound",
    "UnsoundTruncation",
]
