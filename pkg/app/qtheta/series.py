"""Truncated Laurent series in q with Laurent-polynomial coefficients.

A :class:`QSeries` stores coefficients for q-exponents ``lo..order``; every
coefficient above ``order`` is unknown and never reported.  ``lo`` is a
proven lower bound for the valuation: coefficients below it are zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Protocol, Tuple

from .errors import NotAUnit, OrderExceeded, UnsoundTruncation, UsageError
from .laurent import (
    DEFAULT_ARITY,
    VARS,
    LaurentPoly,
    Scalar,
    Terms,
    format_terms,
    key_degree,
    key_in_window,
    normalize_scalar,
    pack,
    terms_add_into,
    terms_mul,
    terms_scale,
    terms_window,
    to_scalar,
    var_key,
)

Coeffs = Dict[int, Terms]


class MonomialLike(Protocol):
    coef: Scalar
    q_exp: int
    var_exps: Tuple[int, ...]


@dataclass(frozen=True)
class MismatchRecord:
    q_exp: int
    diff: LaurentPoly


class QSeries:
    """Immutable truncated q-series; see module docstring."""

    __slots__ = ("_c", "lo", "order", "base_div", "arity")

    def __init__(
        self,
        coeffs: Mapping[int, object] | None = None,
        order: int = 0,
        *,
        lo: int | None = None,
        base_div: int = 1,
        arity: int = DEFAULT_ARITY,
    ) -> None:
        if base_div < 1:
            raise UsageError(f"base_div must be positive, got {base_div}")
        clean: Coeffs = {}
        for e, value in (coeffs or {}).items():
            if e > order:
                continue
            if isinstance(value, LaurentPoly):
                if value.arity != arity:
                    raise UsageError(f"coefficient arity {value.arity} != series arity {arity}")
                terms = dict(value.terms)
            elif isinstance(value, dict):
                terms = {k: c for k, c in value.items() if c}
            else:
                scalar = to_scalar(value)
                terms = {0: scalar} if scalar else {}
            if terms:
                clean[e] = terms
        floor = min(clean) if clean else order + 1
        if lo is None:
            lo = min(floor, 0) if clean else min(0, order + 1)
        elif clean and lo > floor:
            raise UsageError(f"declared lo={lo} above stored exponent {floor}")
        self._c = clean
        self.lo = lo
        self.order = order
        self.base_div = base_div
        self.arity = arity

    @classmethod
    def _wrap(cls, c: Coeffs, order: int, lo: int, base_div: int, arity: int) -> "QSeries":
        obj = cls.__new__(cls)
        obj._c = {e: t for e, t in c.items() if t and e <= order}
        if obj._c:
            lo = min(lo, min(obj._c))
        obj.lo = lo
        obj.order = order
        obj.base_div = base_div
        obj.arity = arity
        return obj

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, order: int, *, lo: int | None = None, base_div: int = 1, arity: int = DEFAULT_ARITY) -> "QSeries":
        return cls._wrap({}, order, order + 1 if lo is None else lo, base_div, arity)

    @classmethod
    def one(cls, order: int, *, base_div: int = 1, arity: int = DEFAULT_ARITY) -> "QSeries":
        return cls.monomial(1, 0, order, base_div=base_div, arity=arity)

    @classmethod
    def monomial(
        cls,
        coef: object,
        q_exp: int,
        order: int,
        *,
        base_div: int = 1,
        arity: int = DEFAULT_ARITY,
    ) -> "QSeries":
        if isinstance(coef, LaurentPoly):
            terms = dict(coef.terms)
        else:
            scalar = to_scalar(coef)
            terms = {0: scalar} if scalar else {}
        return cls._wrap({q_exp: terms}, order, min(q_exp, order + 1), base_div, arity)

    # inspection -------------------------------------------------------------
    @property
    def coeffs(self) -> Dict[int, LaurentPoly]:
        return {e: LaurentPoly(t, self.arity) for e, t in sorted(self._c.items())}

    @property
    def raw(self) -> Mapping[int, Terms]:
        return self._c

    def exponents(self) -> Iterator[int]:
        return iter(sorted(self._c))

    def valuation(self) -> int | None:
        return min(self._c) if self._c else None

    def term_count(self) -> int:
        return sum(len(t) for t in self._c.values())

    def is_zero(self) -> bool:
        return not self._c

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.order == other.order
            and self.base_div == other.base_div
            and self.arity == other.arity
            and self._c == other._c
        )

    def __hash__(self) -> int:
        return hash((self.order, self.base_div, tuple(sorted(self._c))))

    def __repr__(self) -> str:
        return f"QSeries(lo={self.lo}, order={self.order}, terms={self.term_count()})"

    # operator sugar ---------------------------------------------------------
    def __add__(self, other: "QSeries") -> "QSeries":
        return qs_add(self, other)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return qs_add(self, qs_neg(other))

    def __neg__(self) -> "QSeries":
        return qs_neg(self)

    def __mul__(self, other: "QSeries") -> "QSeries":
        return qs_mul(self, other)


def _check_compatible(a: QSeries, b: QSeries) -> None:
    if a.base_div != b.base_div:
        raise UsageError(f"base_div mismatch: {a.base_div} vs {b.base_div}")
    if a.arity != b.arity:
        raise UsageError(f"arity mismatch: {a.arity} vs {b.arity}")


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    _check_compatible(a, b)
    order = min(a.order, b.order)
    out: Coeffs = {e: dict(t) for e, t in a.raw.items() if e <= order}
    for e, t in b.raw.items():
        if e > order:
            continue
        target = out.setdefault(e, {})
        terms_add_into(target, t)
    return QSeries._wrap(out, order, min(a.lo, b.lo), a.base_div, a.arity)


def qs_neg(a: QSeries) -> QSeries:
    return QSeries._wrap({e: {k: -c for k, c in t.items()} for e, t in a.raw.items()}, a.order, a.lo, a.base_div, a.arity)


def qs_sub(a: QSeries, b: QSeries) -> QSeries:
    return qs_add(a, qs_neg(b))


def qs_scale(a: QSeries, poly: LaurentPoly, q_shift: int = 0) -> QSeries:
    """Multiply by the exact polynomial ``poly * q^q_shift``."""

    if poly.arity != a.arity:
        raise UsageError(f"arity mismatch: {poly.arity} vs {a.arity}")
    if poly.is_monomial():
        ((key, coef),) = poly.terms.items()
        c = {e + q_shift: terms_scale(t, coef, key) for e, t in a.raw.items()}
    else:
        c = {e + q_shift: terms_mul(t, poly.terms) for e, t in a.raw.items()}
    return QSeries._wrap(c, a.order + q_shift, a.lo + q_shift, a.base_div, a.arity)


def qs_truncate(a: QSeries, order: int) -> QSeries:
    if order > a.order:
        raise OrderExceeded(f"cannot extend series valid to {a.order} up to {order}")
    return QSeries._wrap(dict(a.raw), order, min(a.lo, order + 1), a.base_div, a.arity)


def qs_window(a: QSeries, window: int | None) -> QSeries:
    """Drop every term with a variable exponent outside ``[-window, window]``."""

    if window is None:
        return a
    return QSeries._wrap({e: terms_window(t, window) for e, t in a.raw.items()}, a.order, a.lo, a.base_div, a.arity)


def qs_mul(a: QSeries, b: QSeries, *, window: int | None = None) -> QSeries:
    """Cauchy product, valid to ``min(a.order + b.lo, b.order + a.lo)``."""

    _check_compatible(a, b)
    order = min(a.order + b.lo, b.order + a.lo)
    out: Coeffs = {}
    b_items = sorted(b.raw.items())
    for ea, ta in sorted(a.raw.items()):
        for eb, tb in b_items:
            e = ea + eb
            if e > order:
                break
            target = out.setdefault(e, {})
            if len(ta) <= len(tb):
                for k, c in ta.items():
                    terms_add_into(target, tb, c, k)
            else:
                for k, c in tb.items():
                    terms_add_into(target, ta, c, k)
    if window is not None:
        out = {e: terms_window(t, window) for e, t in out.items()}
    return QSeries._wrap(out, order, a.lo + b.lo, a.base_div, a.arity)


def window_inverse(terms: Mapping[int, Scalar], window: int) -> Terms:
    """Invert a Laurent polynomial as a series truncated to ``window``.

    The term of least (total degree, exponent vector) leads; the rest is
    expanded geometrically, so ``1/(1-x) = 1 + x + x^2 + ...``.
    """

    if not terms:
        raise NotAUnit("cannot invert the zero polynomial")

    def rank(key: int) -> Tuple[int, Tuple[int, ...]]:
        exps = tuple(key_degree(key, i) for i in range(len(VARS)))
        return sum(exps), exps

    lead = min(terms, key=rank)
    inv_coef = Fraction(1) / terms[lead]
    # 1/(m (1 - r)) with r = 1 - p/m
    r = {k - lead: -c * inv_coef for k, c in terms.items() if k != lead}
    result: Terms = {0: 1}
    power: Terms = {0: 1}
    for _ in range(8 * window + 16):
        power = terms_window(terms_mul(power, r), window)
        if not power:
            break
        terms_add_into(result, power)
    else:
        raise NotAUnit("window inverse did not terminate")
    return terms_window(terms_scale(result, normalize_scalar(inv_coef), -lead), window)


def qs_invert(a: QSeries, n_terms: int, *, window: int | None = None) -> QSeries:
    """Invert a series whose lowest nonzero coefficient is a monomial unit.

    In window mode any nonzero leading coefficient is accepted and inverted
    with :func:`window_inverse`.
    """

    e0 = a.valuation()
    if e0 is None:
        raise NotAUnit("cannot invert a series with no nonzero coefficient up to its order")
    lead = a.raw[e0]
    if window is not None:
        inv_lead = window_inverse(lead, window)
    else:
        if len(lead) != 1:
            raise NotAUnit(
                f"leading coefficient {format_terms(lead, a.arity)} at q^{e0} is not a monomial unit"
            )
        ((key, coef),) = lead.items()
        inv_lead = {-key: normalize_scalar(Fraction(1) / coef)}
    span = min(n_terms, a.order - e0)
    src = a.raw
    b: list[Terms] = [inv_lead]
    for k in range(1, span + 1):
        acc: Terms = {}
        for j in range(1, k + 1):
            tj = src.get(e0 + j)
            if tj and b[k - j]:
                terms_add_into(acc, terms_mul(tj, b[k - j]))
        if window is not None:
            acc = terms_window(acc, window)
        b.append(terms_scale(terms_mul(acc, inv_lead), -1) if acc else {})
        if window is not None:
            b[-1] = terms_window(b[-1], window)
    coeffs = {k - e0: t for k, t in enumerate(b) if t}
    return QSeries._wrap(coeffs, -e0 + span, -e0, a.base_div, a.arity)


def qs_subst_q_power(a: QSeries, k: int) -> QSeries:
    if k < 1:
        raise UsageError(f"q-power substitution needs k >= 1, got {k}")
    return QSeries._wrap({k * e: dict(t) for e, t in a.raw.items()}, k * a.order, k * a.lo, a.base_div, a.arity)


def qs_subst_var(
    a: QSeries,
    var: str,
    m: MonomialLike,
    *,
    degree_range: Tuple[int | None, int | None] | None = None,
) -> QSeries:
    """Replace ``var`` by the monomial ``m`` and re-bucket q-exponents.

    ``degree_range`` bounds the exponent of ``var`` in every coefficient of
    the full (untruncated) series; it is needed whenever ``m`` carries a
    power of q, because unknown coefficients above ``order`` can then move
    below it.
    """

    if var not in VARS or VARS.index(var) >= a.arity:
        raise UsageError(f"unknown variable {var!r}")
    index = VARS.index(var)
    alpha = m.q_exp
    dmin, dmax = degree_range if degree_range is not None else (None, None)
    if alpha == 0:
        order = a.order
    elif alpha > 0:
        if dmin is None:
            raise UnsoundTruncation(f"substituting {var} -> q^{alpha}*... needs a lower bound on its degree")
        order = a.order + min(0, alpha * dmin)
    else:
        if dmax is None:
            raise UnsoundTruncation(f"substituting {var} -> q^{alpha}*... needs an upper bound on its degree")
        order = a.order + min(0, alpha * dmax)
    target_key = pack(m.var_exps) if m.var_exps else 0
    unit = var_key(index)
    coef = to_scalar(m.coef)
    out: Coeffs = {}
    for e, t in a.raw.items():
        for key, c in t.items():
            d = key_degree(key, index)
            if (dmin is not None and d < dmin) or (dmax is not None and d > dmax):
                raise UnsoundTruncation(f"degree {d} of {var} outside declared range {degree_range}")
            new_e = e + d * alpha
            if new_e > order:
                continue
            new_key = key - d * unit + d * target_key
            value = c * (coef**d if d >= 0 else Fraction(1) / coef ** (-d))
            terms_add_into(out.setdefault(new_e, {}), {new_key: value})
    out = {e: {k: normalize_scalar(c) for k, c in t.items()} for e, t in out.items()}
    floor = min((e for e, t in out.items() if t), default=order + 1)
    return QSeries._wrap(out, order, min(floor, order + 1), a.base_div, a.arity)


def qs_coeff(a: QSeries, e: int) -> LaurentPoly:
    if e > a.order or e < a.lo:
        raise OrderExceeded(f"coefficient q^{e} outside validated range {a.lo}..{a.order}")
    return LaurentPoly(a.raw.get(e, {}), a.arity)


def qs_diff_report(a: QSeries, b: QSeries) -> MismatchRecord | None:
    """First q-exponent where ``a`` and ``b`` differ, with ``a - b`` there.

    Coefficients below ``lo`` are exact zeros, so the scan starts at the
    smaller ``lo`` and covers the overlap ``[max(lo), min(order)]`` along with
    the low end of the other series.  A range ending below both floors is a
    usage error.
    """

    _check_compatible(a, b)
    start = min(a.lo, b.lo)
    stop = min(a.order, b.order)
    if stop < start:
        raise UsageError(f"empty comparison range {start}..{stop}")
    for e in sorted(set(a.raw) | set(b.raw)):
        if e > stop:
            break
        diff = dict(a.raw.get(e, {}))
        terms_add_into(diff, b.raw.get(e, {}), -1)
        if diff:
            return MismatchRecord(e, LaurentPoly(diff, a.arity))
    return None


# ---------------------------------------------------------------------------
# Factor kernels: multiply by (1 - t q^e) or its inverse without building the
# factor as a series.


def mul_linear_factor(a: QSeries, t_key: int, t_coef: Scalar, e: int, *, window: int | None = None) -> QSeries:
    """Multiply by ``1 - t*q^e`` with ``t = t_coef * vars^t_key``."""

    shift = min(0, e)
    order = a.order + shift
    out: Coeffs = {k: dict(t) for k, t in a.raw.items() if k <= order}
    for k, t in a.raw.items():
        k2 = k + e
        if k2 > order:
            continue
        terms_add_into(out.setdefault(k2, {}), t, -t_coef, t_key)
    if window is not None:
        out = {k: terms_window(t, window) for k, t in out.items()}
    return QSeries._wrap(out, order, a.lo + shift, a.base_div, a.arity)


def mul_inverse_factor(a: QSeries, t_key: int, t_coef: Scalar, e: int, *, window: int | None = None) -> QSeries:
    """Multiply by ``1/(1 - t*q^e)``.

    ``e >= 1`` expands geometrically in q; ``e < 0`` first rewrites the
    factor as ``-t^-1 q^-e / (1 - t^-1 q^-e)``.  ``e == 0`` needs a constant
    ``t != 1`` in exact mode; window mode expands ``1/(1 - t)`` in the
    variables.
    """

    if e < 0:
        inv = normalize_scalar(Fraction(1) / t_coef)
        scaled = QSeries._wrap(
            {k - e: terms_scale(t, -inv, -t_key) for k, t in a.raw.items()},
            a.order - e,
            a.lo - e,
            a.base_div,
            a.arity,
        )
        return mul_inverse_factor(scaled, -t_key, inv, -e, window=window)
    if e == 0:
        if t_key == 0:
            if t_coef == 1:
                raise NotAUnit("factor (1 - 1) has no inverse")
            factor = normalize_scalar(Fraction(1) / (1 - t_coef))
            return QSeries._wrap({k: terms_scale(t, factor) for k, t in a.raw.items()}, a.order, a.lo, a.base_div, a.arity)
        if window is None:
            raise NotAUnit("factor 1 - t with variable t has no inverse in exact mode")
        inv = window_inverse({0: 1, t_key: -t_coef}, window)
        out = {k: terms_window(terms_mul(t, inv), window) for k, t in a.raw.items()}
        return QSeries._wrap(out, a.order, a.lo, a.base_div, a.arity)
    out: Coeffs = {}
    for k in range(a.lo, a.order + 1):
        acc = dict(a.raw.get(k, {}))
        prev = out.get(k - e)
        if prev:
            terms_add_into(acc, prev, t_coef, t_key)
        if window is not None and acc:
            acc = terms_window(acc, window)
        if acc:
            out[k] = acc
    return QSeries._wrap(out, a.order, a.lo, a.base_div, a.arity)


def restrict_window(a: QSeries, window: int) -> Dict[int, Terms]:
    """Coefficients restricted to the variable window, for comparisons."""

    return {e: r for e, t in a.raw.items() if (r := {k: c for k, c in t.items() if key_in_window(k, window)})}


def format_series(a: QSeries) -> str:
    """Dump one ``q^e : <poly>`` line per exponent from ``lo`` to ``order``."""

    lines = []
    for e in range(a.lo, a.order + 1):
        label = str(e) if a.base_div == 1 else str(Fraction(e, a.base_div))
        lines.append(f"q^{label} : {format_terms(a.raw.get(e, {}), a.arity)}")
    return "\n".join(lines)


__all__ = [
    "QSeries",
    "MismatchRecord",
    "qs_add",
    "qs_neg",
    "qs_sub",
    "qs_scale",
    "qs_mul",
    "qs_invert",
    "qs_subst_q_power",
    "qs_subst_var",
    "qs_coeff",
    "qs_diff_report",
    "qs_truncate",
    "qs_window",
    "window_inverse",
    "mul_linear_factor",
    "mul_inverse_factor",
    "restrict_window",
    "format_series",
]
