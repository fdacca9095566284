"""Expression trees for q-series objects and their exact evaluation."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, MutableMapping, Sequence, Tuple

from .blocks import (
    LinearRun,
    Monomial,
    Param,
    SqrtHalf,
    SumCertificate,
    SumSpec,
    apply_runs,
    certify,
    param_run,
    run_zero_problem,
    runs_shift,
    sum_eval,
)
from .errors import NonEvaluable, NotAUnit, QThetaError
from .laurent import DEFAULT_ARITY, LaurentPoly, format_terms, to_scalar
from .series import QSeries, qs_add, qs_invert, qs_mul, qs_neg, qs_scale, qs_truncate

# Probing for the leading coefficient of an inverse stops after this many
# orders above the lower bound.
PROBE_LIMIT = 64


class Expr:
    """Base class of all expression nodes."""

    def __mul__(self, other: "Expr") -> "Expr":
        return Mul((self, other))

    def __add__(self, other: "Expr") -> "Expr":
        return Add((self, other))

    def __neg__(self) -> "Expr":
        return Neg(self)

    def __sub__(self, other: "Expr") -> "Expr":
        return Add((self, Neg(other)))


@dataclass(frozen=True)
class Const(Expr):
    poly: LaurentPoly


@dataclass(frozen=True)
class MonomialTerm(Expr):
    mono: Monomial


@dataclass(frozen=True)
class Add(Expr):
    terms: Tuple[Expr, ...]


@dataclass(frozen=True)
class Mul(Expr):
    factors: Tuple[Expr, ...]


@dataclass(frozen=True)
class Neg(Expr):
    inner: Expr


@dataclass(frozen=True)
class PochInf(Expr):
    mono: Monomial
    step: int = 1


@dataclass(frozen=True)
class PochFin(Expr):
    param: Param
    length: int
    step: int = 1


@dataclass(frozen=True)
class Sum(Expr):
    spec: SumSpec


@dataclass(frozen=True)
class Inv(Expr):
    inner: Expr


def const(value: object) -> Const:
    if isinstance(value, LaurentPoly):
        return Const(value)
    return Const(LaurentPoly.constant(to_scalar(value)))


def products(*monos: Monomial, step: int = 1) -> Tuple[PochInf, ...]:
    """``(m1, m2, ...; q^step)_inf`` as a tuple of factors."""

    return tuple(PochInf(m, step) for m in monos)


# ---------------------------------------------------------------------------
# factor runs


def _runs_of(node: Expr, *, windowed: bool) -> List[LinearRun] | None:
    """Linear-factor runs for product nodes, None for anything else."""

    if isinstance(node, PochInf):
        m = node.mono
        return [LinearRun(m.key, m.coef, m.q_exp, node.step, None)]
    if isinstance(node, PochFin):
        return [param_run(node.param, node.length, node.step)]
    if isinstance(node, Inv) and isinstance(node.inner, (PochInf, PochFin)):
        inner = node.inner
        if isinstance(inner, PochInf):
            m = inner.mono
            run = LinearRun(m.key, m.coef, m.q_exp, inner.step, None, inverse=True)
        else:
            run = param_run(inner.param, inner.length, inner.step, inverse=True)
        if run_zero_problem(run, windowed=windowed):
            return None
        return [run]
    return None


# ---------------------------------------------------------------------------
# lower bounds


@lru_cache(maxsize=4096)
def _sum_certificate(spec: SumSpec, windowed: bool) -> SumCertificate:
    return certify(spec, windowed=windowed)


@lru_cache(maxsize=4096)
def lower_bound(node: Expr, window: int | None = None) -> int:
    """Provable lower bound on the q-valuation of ``node``."""

    windowed = window is not None
    if isinstance(node, Const):
        return 0
    if isinstance(node, MonomialTerm):
        return node.mono.q_exp
    if isinstance(node, Add):
        return min((lower_bound(t, window) for t in node.terms), default=0)
    if isinstance(node, Neg):
        return lower_bound(node.inner, window)
    if isinstance(node, Mul):
        return sum(lower_bound(f, window) for f in node.factors)
    if isinstance(node, Sum):
        return _sum_certificate(node.spec, windowed).lower_bound()
    runs = _runs_of(node, windowed=windowed)
    if runs is not None:
        return runs_shift(runs)
    if isinstance(node, Inv):
        v, _ = _leading(node.inner, window)
        return -v
    raise NonEvaluable(f"unsupported node {type(node).__name__}")


@lru_cache(maxsize=1024)
def _leading(inner: Expr, window: int | None) -> Tuple[int, QSeries]:
    """Valuation of ``inner`` and a series computed past it."""

    lb = lower_bound(inner, window)
    order = lb
    while order <= lb + PROBE_LIMIT:
        series = _eval(inner, order, window, None, "")
        v = series.valuation()
        if v is not None:
            return v, series
        order = lb + 2 * (order - lb) + 4
    raise NotAUnit(f"no nonzero coefficient up to q^{lb + PROBE_LIMIT}; cannot invert")


# ---------------------------------------------------------------------------
# evaluation


def _raise_floor(series: QSeries, bound: int) -> QSeries:
    if bound <= series.lo:
        return series
    return QSeries._wrap(dict(series.raw), series.order, bound, series.base_div, series.arity)


def _eval_mul(node: Mul, N: int, window: int | None, stats, path: str) -> QSeries:
    runs: List[LinearRun] = []
    others: List[Tuple[int, Expr]] = []
    for i, f in enumerate(node.factors):
        r = _runs_of(f, windowed=window is not None)
        if r is None:
            others.append((i, f))
        else:
            runs.extend(r)
    target = N - runs_shift(runs)
    bounds = [lower_bound(f, window) for _, f in others]
    total = sum(bounds)
    parts: List[QSeries] = []
    for (i, f), b in zip(others, bounds):
        part = _eval(f, target - (total - b), window, stats, f"{path}/mul[{i}]")
        parts.append(_raise_floor(part, b))
    if parts:
        parts.sort(key=lambda s: s.term_count(), reverse=True)
        acc = parts[0]
        for p in parts[1:]:
            acc = qs_mul(acc, p, window=window)
        if acc.order > target:
            acc = qs_truncate(acc, target)
    else:
        acc = QSeries.one(target)
    return apply_runs(acc, runs, window=window)


def _eval_inv(node: Inv, N: int, window: int | None, stats, path: str) -> QSeries:
    v, probe = _leading(node.inner, window)
    need = max(N + 2 * v, v)
    series = probe if probe.order >= need else _eval(node.inner, need, window, stats, f"{path}/inv")
    return qs_invert(series, N + v, window=window)


def _eval(node: Expr, N: int, window: int | None, stats, path: str) -> QSeries:
    try:
        if isinstance(node, Const):
            return QSeries.monomial(node.poly, 0, N)
        if isinstance(node, MonomialTerm):
            m = node.mono
            return QSeries.monomial(m.to_poly(), m.q_exp, N)
        if isinstance(node, Add):
            total = QSeries.zero(N)
            for i, t in enumerate(node.terms):
                total = qs_add(total, _eval(t, N, window, stats, f"{path}/add[{i}]"))
            return total
        if isinstance(node, Neg):
            return qs_neg(_eval(node.inner, N, window, stats, f"{path}/neg"))
        if isinstance(node, Mul):
            return _eval_mul(node, N, window, stats, path)
        if isinstance(node, Sum):
            try:
                return sum_eval(node.spec, N, window=window, stats=stats)
            except QThetaError as exc:
                if exc.path and not exc.path.startswith("/"):
                    exc.path = f"{path}/sum/{exc.path}"
                raise
        runs = _runs_of(node, windowed=window is not None)
        if runs is not None:
            return apply_runs(QSeries.one(N - runs_shift(runs)), runs, window=window)
        if isinstance(node, Inv):
            return _eval_inv(node, N, window, stats, path)
        raise NonEvaluable(f"unsupported node {type(node).__name__}")
    except QThetaError as exc:
        exc.with_path(path or "/")
        raise


def eval_expr(
    node: Expr,
    N: int,
    *,
    window: int | None = None,
    stats: MutableMapping[str, int] | None = None,
) -> QSeries:
    """Evaluate ``node`` exactly to q-order ``N`` (variables windowed if asked)."""

    result = _eval(node, N, window, stats, "")
    if result.order > N:
        result = qs_truncate(result, N)
    return result


# ---------------------------------------------------------------------------
# validation


@dataclass
class Validation:
    """Outcome of :func:`validate_evaluable`; ``ok`` False carries a diagnostic."""

    ok: bool
    path: str | None = None
    message: str | None = None
    error_code: str | None = None
    certificates: Dict[str, SumCertificate] = field(default_factory=dict)

    def raise_for_error(self) -> None:
        if not self.ok:
            raise NonEvaluable(self.message or "not evaluable", error_code=self.error_code, path=self.path)


def _validate(node: Expr, path: str, certs: Dict[str, SumCertificate]) -> None:
    if isinstance(node, (Const, MonomialTerm, PochInf)):
        return
    if isinstance(node, PochFin):
        if isinstance(node.param, SqrtHalf):
            raise NonEvaluable("unpaired square root parameter", path=path)
        return
    if isinstance(node, Add):
        for i, t in enumerate(node.terms):
            _validate(t, f"{path}/add[{i}]", certs)
        return
    if isinstance(node, Mul):
        for i, f in enumerate(node.factors):
            _validate(f, f"{path}/mul[{i}]", certs)
        return
    if isinstance(node, Neg):
        _validate(node.inner, f"{path}/neg", certs)
        return
    if isinstance(node, Sum):
        try:
            certs[f"{path}/sum"] = _sum_certificate(node.spec, False)
        except QThetaError as exc:
            exc.path = f"{path}/sum/{exc.path}" if exc.path else f"{path}/sum"
            raise
        return
    if isinstance(node, Inv):
        inner = node.inner
        if isinstance(inner, (PochInf, PochFin)):
            if _runs_of(node, windowed=False) is None:
                raise NotAUnit(f"leading coefficient of {_describe(inner)} is not a monomial unit", path=f"{path}/inv")
            return
        _validate(inner, f"{path}/inv", certs)
        v, series = _leading(inner, None)
        lead = series.raw[v]
        if len(lead) != 1:
            raise NotAUnit(
                f"leading coefficient {format_terms(lead, DEFAULT_ARITY)} at q^{v} is not a monomial unit",
                path=f"{path}/inv",
            )
        return
    raise NonEvaluable(f"unsupported node {type(node).__name__}", path=path)


def _describe(node: Expr) -> str:
    if isinstance(node, PochInf):
        return f"({node.mono}; q^{node.step})_inf"
    if isinstance(node, PochFin):
        return f"({node.param.m}; q^{node.step})_{node.length}"
    return type(node).__name__


def validate_evaluable(node: Expr, path: str = "") -> Validation:
    """Certify exact evaluability, or return a diagnostic naming the node."""

    certs: Dict[str, SumCertificate] = {}
    try:
        _validate(node, path, certs)
    except QThetaError as exc:
        return Validation(False, exc.path or path or "/", str(exc.args[0]) if exc.args else "", exc.error_code)
    return Validation(True, certificates=certs)


def walk(node: Expr) -> Sequence[Expr]:
    """All nodes of the tree in pre-order."""

    out: List[Expr] = [node]
    if isinstance(node, (Add,)):
        for t in node.terms:
            out.extend(walk(t))
    elif isinstance(node, Mul):
        for f in node.factors:
            out.extend(walk(f))
    elif isinstance(node, (Neg, Inv)):
        out.extend(walk(node.inner))
    return out


__all__ = [
    "Expr",
    "Const",
    "MonomialTerm",
    "Add",
    "Mul",
    "Neg",
    "PochInf",
    "PochFin",
    "Sum",
    "Inv",
    "const",
    "products",
    "eval_expr",
    "lower_bound",
    "validate_evaluable",
    "Validation",
    "walk",
]
