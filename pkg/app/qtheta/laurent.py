"""Sparse multivariate Laurent polynomials over the rationals.

Exponent vectors are packed into a single Python int using balanced base
``2**BITS`` digits, so adding two keys is the same as adding the vectors as
long as every component stays within ``EXP_LIMIT``.  Coefficients are plain
ints when integral and ``fractions.Fraction`` otherwise.

Text format (one polynomial per string)::

    poly  := "0" | term (("+" | "-") term)*
    term  := coef ("*" factor)* | factor ("*" factor)*
    factor:= var | var "^" int
    coef  := int | int "/" int
    var   := "x" | "y" | "u" | "v"

Terms are printed in ascending (total degree, exponent vector) order.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

from .errors import ArityError, NotAUnit, UsageError

Scalar = Union[int, Fraction]
ExpVec = Tuple[int, ...]
Terms = Dict[int, Scalar]

VARS: Tuple[str, ...] = ("x", "y", "u", "v")
MAX_ARITY = len(VARS)
DEFAULT_ARITY = MAX_ARITY

BITS = 20
BASE = 1 << BITS
HALF = BASE >> 1
EXP_LIMIT = HALF - 1


def normalize_scalar(value: Scalar) -> Scalar:
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def to_scalar(value: object) -> Scalar:
    """Coerce ints, Fractions and ``"p/q"`` strings to a canonical scalar."""

    if isinstance(value, bool):
        raise UsageError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return normalize_scalar(value)
    if isinstance(value, str):
        try:
            return normalize_scalar(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"not a rational: {value!r}") from exc
    raise UsageError(f"not a rational: {value!r}")


def pack(exps: Sequence[int]) -> int:
    key = 0
    for e in reversed(exps):
        if e > EXP_LIMIT or e < -EXP_LIMIT:
            raise UsageError(f"exponent {e} outside supported range")
        key = key * BASE + e
    return key


def unpack(key: int, arity: int = MAX_ARITY) -> ExpVec:
    out = []
    for _ in range(arity):
        digit = key % BASE
        if digit >= HALF:
            digit -= BASE
        out.append(digit)
        key = (key - digit) >> BITS
    return tuple(out)


def var_key(index: int) -> int:
    """Packed key of the single variable ``VARS[index]``."""

    return 1 << (BITS * index)


def key_degree(key: int, index: int) -> int:
    """Exponent of variable ``index`` inside a packed key."""

    return unpack(key, index + 1)[index]


def key_in_window(key: int, window: int) -> bool:
    for e in unpack(key):
        if e > window or e < -window:
            return False
    return True


def _check_arity(exps: Sequence[int], arity: int) -> None:
    if len(exps) > MAX_ARITY or any(e != 0 for e in exps[arity:]):
        raise ArityError(f"exponent vector {tuple(exps)} exceeds arity {arity}")


# ---------------------------------------------------------------------------
# Raw dict kernels (used directly by the series layer).


def terms_add_into(target: Terms, src: Mapping[int, Scalar], scale: Scalar = 1, shift: int = 0) -> None:
    """target += scale * var^shift * src, dropping cancelled entries."""

    get = target.get
    for k, c in src.items():
        k2 = k + shift
        value = get(k2, 0) + c * scale
        if value:
            target[k2] = value
        else:
            target.pop(k2, None)


def terms_mul(a: Mapping[int, Scalar], b: Mapping[int, Scalar]) -> Terms:
    if len(a) > len(b):
        a, b = b, a
    out: Terms = {}
    for k, c in a.items():
        terms_add_into(out, b, c, k)
    return out


def terms_scale(a: Mapping[int, Scalar], scale: Scalar, shift: int = 0) -> Terms:
    if not scale:
        return {}
    return {k + shift: c * scale for k, c in a.items()}


def terms_window(a: Mapping[int, Scalar], window: int) -> Terms:
    return {k: c for k, c in a.items() if key_in_window(k, window)}


# ---------------------------------------------------------------------------


class LaurentPoly:
    """Immutable sparse Laurent polynomial in up to four variables."""

    __slots__ = ("_terms", "arity", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | None = None, arity: int = DEFAULT_ARITY) -> None:
        if not 1 <= arity <= MAX_ARITY:
            raise ArityError(f"arity must be between 1 and {MAX_ARITY}, got {arity}")
        clean: Terms = {}
        for k, c in (terms or {}).items():
            if c:
                clean[k] = normalize_scalar(c)
        self._terms = clean
        self.arity = arity
        self._hash: int | None = None

    # construction -----------------------------------------------------------
    @classmethod
    def _wrap(cls, terms: Terms, arity: int) -> "LaurentPoly":
        """Wrap an already-clean dict without copying."""

        obj = cls.__new__(cls)
        obj._terms = terms
        obj.arity = arity
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, arity: int = DEFAULT_ARITY) -> "LaurentPoly":
        return cls({}, arity)

    @classmethod
    def constant(cls, value: object, arity: int = DEFAULT_ARITY) -> "LaurentPoly":
        return cls({0: to_scalar(value)}, arity)

    @classmethod
    def one(cls, arity: int = DEFAULT_ARITY) -> "LaurentPoly":
        return cls.constant(1, arity)

    @classmethod
    def monomial(cls, coef: object, exps: Sequence[int] = (), arity: int = DEFAULT_ARITY) -> "LaurentPoly":
        _check_arity(exps, arity)
        return cls({pack(exps): to_scalar(coef)}, arity)

    @classmethod
    def var(cls, name: str, arity: int = DEFAULT_ARITY) -> "LaurentPoly":
        try:
            index = VARS.index(name)
        except ValueError:
            raise UsageError(f"unknown variable {name!r}") from None
        if index >= arity:
            raise ArityError(f"variable {name!r} not available at arity {arity}")
        return cls({var_key(index): 1}, arity)

    @classmethod
    def from_exponents(cls, mapping: Mapping[Sequence[int], object], arity: int = DEFAULT_ARITY) -> "LaurentPoly":
        terms: Terms = {}
        for exps, coef in mapping.items():
            _check_arity(exps, arity)
            terms_add_into(terms, {pack(exps): to_scalar(coef)})
        return cls(terms, arity)

    # inspection -------------------------------------------------------------
    @property
    def terms(self) -> Mapping[int, Scalar]:
        return self._terms

    def items(self) -> Iterator[Tuple[ExpVec, Scalar]]:
        for k, c in self._terms.items():
            yield unpack(k, self.arity), c

    def as_dict(self) -> Dict[ExpVec, Scalar]:
        return dict(self.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_term(self) -> Scalar:
        return self._terms.get(0, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def degree_range(self, var: str) -> Tuple[int, int] | None:
        """Return (min, max) exponent of ``var`` over all terms, or None if zero."""

        index = VARS.index(var)
        degrees = [unpack(k, index + 1)[index] for k in self._terms]
        if not degrees:
            return None
        return min(degrees), max(degrees)

    # arithmetic -------------------------------------------------------------
    def _same_arity(self, other: "LaurentPoly") -> None:
        if self.arity != other.arity:
            raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: object) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other, self.arity)
        return lp_add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._wrap({k: -c for k, c in self._terms.items()}, self.arity)

    def __sub__(self, other: object) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other, self.arity)
        return lp_add(self, -other)

    def __rsub__(self, other: object) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other: object) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other, self.arity)
        return lp_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if exponent < 0:
            return lp_invert_unit(self) ** (-exponent)
        result = LaurentPoly.one(self.arity)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPoly):
            return self.arity == other.arity and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self._terms.items())))
        return self._hash

    # text -------------------------------------------------------------------
    def to_text(self) -> str:
        return format_poly(self)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r})"


def lp_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    p._same_arity(q)
    out = dict(p.terms)
    terms_add_into(out, q.terms)
    return LaurentPoly._wrap({k: normalize_scalar(c) for k, c in out.items()}, p.arity)


def lp_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    p._same_arity(q)
    out = terms_mul(p.terms, q.terms)
    return LaurentPoly._wrap({k: normalize_scalar(c) for k, c in out.items()}, p.arity)


def lp_invert_unit(p: LaurentPoly) -> LaurentPoly:
    """Invert a single-term polynomial ``c * m``; anything else is not a unit."""

    if not p.is_monomial():
        raise NotAUnit(f"cannot invert non-monomial {format_poly(p)}")
    ((key, coef),) = p.terms.items()
    return LaurentPoly._wrap({-key: normalize_scalar(Fraction(1) / coef)}, p.arity)


def lp_sum(polys: Iterable[LaurentPoly], arity: int = DEFAULT_ARITY) -> LaurentPoly:
    out: Terms = {}
    for p in polys:
        terms_add_into(out, p.terms)
    return LaurentPoly(out, arity)


# ---------------------------------------------------------------------------
# Text format


def _order_key(item: Tuple[int, Scalar], arity: int) -> Tuple[int, ExpVec]:
    exps = unpack(item[0], arity)
    return sum(exps), exps


def _format_scalar(c: Scalar) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _format_term(exps: ExpVec, coef: Scalar) -> str:
    factors = []
    for name, e in zip(VARS, exps):
        if e == 1:
            factors.append(name)
        elif e:
            factors.append(f"{name}^{e}")
    magnitude = abs(coef)
    if not factors:
        return _format_scalar(magnitude)
    if magnitude == 1:
        return "*".join(factors)
    return "*".join([_format_scalar(magnitude)] + factors)


def format_terms(terms: Mapping[int, Scalar], arity: int = DEFAULT_ARITY) -> str:
    if not terms:
        return "0"
    parts = []
    for key, coef in sorted(terms.items(), key=lambda item: _order_key(item, arity)):
        body = _format_term(unpack(key, arity), coef)
        if not parts:
            parts.append(("-" if coef < 0 else "") + body)
        else:
            parts.append(("- " if coef < 0 else "+ ") + body)
    return " ".join(parts)


def format_poly(p: LaurentPoly) -> str:
    return format_terms(p.terms, p.arity)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^([a-z])(?:\^\(?(-?\d+)\)?)?$")


def parse_laurent(text: str, arity: int = DEFAULT_ARITY) -> LaurentPoly:
    """Parse the text format produced by :func:`format_poly`."""

    source = text.strip()
    if not source:
        raise UsageError("empty polynomial text")
    # exponent signs are part of factors, hide them from the term splitter
    protected = re.sub(r"\^(\(?)\s*-", r"^\1~", source)
    pieces = _TERM_SPLIT.split(protected)
    if pieces and pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    if len(pieces) % 2:
        raise UsageError(f"malformed polynomial: {text!r}")
    terms: Terms = {}
    for sign, body in zip(pieces[0::2], pieces[1::2]):
        body = body.replace("~", "-").strip()
        if not body:
            raise UsageError(f"malformed polynomial: {text!r}")
        coef: Scalar = 1
        exps = [0] * MAX_ARITY
        for factor in body.split("*"):
            factor = factor.strip()
            match = _FACTOR.match(factor)
            if match:
                name = match.group(1)
                if name not in VARS:
                    raise UsageError(f"unknown variable {name!r} in {text!r}")
                index = VARS.index(name)
                if index >= arity:
                    raise ArityError(f"variable {name!r} not available at arity {arity}")
                exps[index] += int(match.group(2) or 1)
            else:
                coef = coef * to_scalar(factor)
        if sign == "-":
            coef = -coef
        terms_add_into(terms, {pack(exps): coef})
    return LaurentPoly(terms, arity)


__all__ = [
    "Scalar",
    "ExpVec",
    "VARS",
    "DEFAULT_ARITY",
    "LaurentPoly",
    "lp_add",
    "lp_mul",
    "lp_invert_unit",
    "lp_sum",
    "format_poly",
    "format_terms",
    "parse_laurent",
    "pack",
    "unpack",
    "to_scalar",
    "normalize_scalar",
    "var_key",
    "key_degree",
    "key_in_window",
    "terms_add_into",
    "terms_mul",
    "terms_scale",
    "terms_window",
]
