"""Builders for q-Pochhammer symbols, theta sums and basic hypergeometric series.

Every product here is a run of linear factors ``1 - t*q^e``; a
:class:`LinearRun` describes such a run and :func:`apply_runs` multiplies a
seed series by it (or by its inverse) using the factor kernels of
:mod:`app.qtheta.series`.  Parameterized sums are described by a
:class:`SumSpec` and evaluated by :func:`sum_eval` after :func:`certify`
has proven that only finitely many summands reach below the requested
order.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, MutableMapping, Sequence, Tuple

from .errors import DivergentBound, NonEvaluable, UsageError
from .laurent import (
    DEFAULT_ARITY,
    VARS,
    LaurentPoly,
    Scalar,
    Terms,
    normalize_scalar,
    pack,
    terms_add_into,
    terms_window,
    to_scalar,
)
from .logging_utils import _qtheta_event
from .series import QSeries, mul_inverse_factor, mul_linear_factor, qs_add


# ---------------------------------------------------------------------------
# Monomials and parameters


@dataclass(frozen=True)
class Monomial:
    """``coef * q^q_exp * x^a * y^b * u^c * v^d``."""

    coef: Scalar = 1
    q_exp: int = 0
    var_exps: Tuple[int, int, int, int] = (0, 0, 0, 0)

    def __post_init__(self) -> None:
        coef = to_scalar(self.coef)
        if not coef:
            raise UsageError("monomial coefficient must be nonzero")
        exps = tuple(int(e) for e in self.var_exps)
        if len(exps) > len(VARS):
            raise UsageError(f"too many variable exponents: {exps}")
        exps = exps + (0,) * (len(VARS) - len(exps))
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "var_exps", exps)

    @property
    def key(self) -> int:
        return pack(self.var_exps)

    def is_constant(self) -> bool:
        return not any(self.var_exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(
            normalize_scalar(self.coef * other.coef),
            self.q_exp + other.q_exp,
            tuple(a + b for a, b in zip(self.var_exps, other.var_exps)),
        )

    def __pow__(self, k: int) -> "Monomial":
        coef = self.coef**k if k >= 0 else Fraction(1) / self.coef ** (-k)
        return Monomial(normalize_scalar(coef), self.q_exp * k, tuple(e * k for e in self.var_exps))

    def inverse(self) -> "Monomial":
        return self ** (-1)

    def times_q(self, k: int) -> "Monomial":
        return Monomial(self.coef, self.q_exp + k, self.var_exps)

    def scaled(self, c: Scalar) -> "Monomial":
        return Monomial(normalize_scalar(self.coef * c), self.q_exp, self.var_exps)

    def to_poly(self, arity: int = DEFAULT_ARITY) -> LaurentPoly:
        return LaurentPoly({self.key: self.coef}, arity)

    def sqrt(self) -> "Monomial | None":
        """Exact square root, or None when one does not exist."""

        if self.q_exp % 2 or any(e % 2 for e in self.var_exps):
            return None
        c = Fraction(self.coef)
        if c < 0:
            return None
        num, den = _isqrt_exact(c.numerator), _isqrt_exact(c.denominator)
        if num is None or den is None:
            return None
        return Monomial(normalize_scalar(Fraction(num, den)), self.q_exp // 2, tuple(e // 2 for e in self.var_exps))

    def __str__(self) -> str:
        parts = []
        for name, e in zip(("q",) + VARS, (self.q_exp,) + tuple(self.var_exps)):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        body = "*".join(parts)
        if not body:
            return str(self.coef)
        if self.coef == 1:
            return body
        if self.coef == -1:
            return f"-{body}"
        return f"{self.coef}*{body}"


def _isqrt_exact(n: int) -> int | None:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def mono(coef: object = 1, q: int = 0, x: int = 0, y: int = 0, u: int = 0, v: int = 0) -> Monomial:
    return Monomial(to_scalar(coef), q, (x, y, u, v))


ONE = Monomial()


@dataclass(frozen=True)
class Param:
    m: Monomial


@dataclass(frozen=True)
class Mono(Param):
    """The plain parameter ``m``."""


@dataclass(frozen=True)
class PairSqrt(Param):
    """The joint pair ``+sqrt(m), -sqrt(m)``; contributes ``(m; q^(2*step))_n``."""


@dataclass(frozen=True)
class SqrtHalf(Param):
    """One half ``sign*sqrt(m)`` of a pair; only valid until paired."""

    sign: int = 1


# ---------------------------------------------------------------------------
# Linear factor runs


@dataclass(frozen=True)
class LinearRun:
    """Factors ``1 - t*q^(e0 + step*j)`` for ``j < count`` (``count=None``: infinite)."""

    t_key: int
    t_coef: Scalar
    e0: int
    step: int
    count: int | None
    inverse: bool = False

    def negative_exponents(self) -> List[int]:
        out = []
        j = 0
        while self.count is None or j < self.count:
            e = self.e0 + self.step * j
            if e >= 0:
                break
            out.append(e)
            j += 1
        return out

    def shift(self) -> int:
        """Valuation lower bound of the run; also the order change it causes."""

        total = sum(self.negative_exponents())
        return -total if self.inverse else total


def negative_sum(e0: int, step: int, count: int | None) -> int:
    """Sum of the negative exponents among ``e0 + step*j``, ``j < count``."""

    if e0 >= 0:
        return 0
    c = -(-(-e0) // step)
    if count is not None:
        c = min(c, count)
    return c * e0 + step * c * (c - 1) // 2


def param_run(param: Param, length: int | None, step: int, *, extra_q: int = 0, inverse: bool = False) -> LinearRun:
    if isinstance(param, SqrtHalf):
        raise NonEvaluable(f"unpaired square root parameter {param.sign:+d}*sqrt({param.m})")
    if isinstance(param, PairSqrt):
        step = 2 * step
    m = param.m
    return LinearRun(m.key, m.coef, m.q_exp + extra_q, step, length, inverse)


def runs_shift(runs: Iterable[LinearRun]) -> int:
    return sum(run.shift() for run in runs)


def apply_runs(seed: QSeries, runs: Sequence[LinearRun], *, window: int | None = None) -> QSeries:
    """Multiply ``seed`` by every run; the order changes by ``runs_shift(runs)``."""

    series = seed
    nonneg_start: List[int] = []
    for run in runs:
        kernel = mul_inverse_factor if run.inverse else mul_linear_factor
        negatives = run.negative_exponents()
        for e in negatives:
            series = kernel(series, run.t_key, run.t_coef, e, window=window)
        nonneg_start.append(len(negatives))
    for run, j in zip(runs, nonneg_start):
        kernel = mul_inverse_factor if run.inverse else mul_linear_factor
        while run.count is None or j < run.count:
            e = run.e0 + run.step * j
            if e > series.order - series.lo:
                break
            series = kernel(series, run.t_key, run.t_coef, e, window=window)
            j += 1
    return series


def run_zero_problem(run: LinearRun, *, windowed: bool) -> bool:
    """True when an inverse run contains a non-invertible ``1 - t`` factor."""

    if not run.inverse or run.e0 > 0:
        return False
    if (-run.e0) % run.step:
        return False
    j = -run.e0 // run.step
    if run.count is not None and j >= run.count:
        return False
    if run.t_key == 0:
        return run.t_coef == 1
    return not windowed


# ---------------------------------------------------------------------------
# Pochhammer builders


@lru_cache(maxsize=4096)
def poch_finite(param: Param, length: int, step: int, N: int, window: int | None = None) -> QSeries:
    """``(param; q^step)_length`` truncated at ``N``."""

    if length < 0:
        raise UsageError(f"Pochhammer length must be non-negative, got {length}")
    if step < 1:
        raise UsageError(f"Pochhammer step must be positive, got {step}")
    run = param_run(param, length, step)
    seed = QSeries.one(N - run.shift())
    return apply_runs(seed, [run], window=window)


def poch_infinite(m: Monomial, step: int, N: int, window: int | None = None) -> QSeries:
    """``(m; q^step)_inf`` truncated at ``N``; only factors reaching order N matter."""

    if step < 1:
        raise UsageError(f"Pochhammer step must be positive, got {step}")
    lo_total = negative_sum(m.q_exp, step, None)
    count = 0
    while m.q_exp + step * count <= N - lo_total:
        count += 1
    return poch_finite(Mono(m), count, step, N, window)


def poch_inverse(param: Param, length: int | None, step: int, N: int, *, window: int | None = None) -> QSeries:
    """``1/(param; q^step)_length`` (``length=None`` for the infinite product)."""

    run = param_run(param, length, step, inverse=True)
    if run_zero_problem(run, windowed=window is not None):
        raise NonEvaluable(f"inverse of ({param.m}; q^{step}) hits a non-unit factor")
    seed = QSeries.one(N - run.shift())
    return apply_runs(seed, [run], window=window)


def gauss_binom(top: int, bottom: int, N: int) -> QSeries:
    """Gaussian binomial ``[top choose bottom]`` in q, truncated at ``N``."""

    if bottom < 0 or top < 0 or bottom > top:
        raise UsageError(f"gauss_binom needs 0 <= bottom <= top, got {top}, {bottom}")
    q = Mono(mono(q=1))
    runs = [
        param_run(q, top, 1),
        param_run(q, bottom, 1, inverse=True),
        param_run(q, top - bottom, 1, inverse=True),
    ]
    return apply_runs(QSeries.one(N), runs)


# ---------------------------------------------------------------------------
# Sum specifications


@dataclass(frozen=True)
class Affine:
    """``a*n + b`` as a function of the summation index."""

    a: int = 0
    b: int = 0

    def __call__(self, n: int) -> int:
        return self.a * n + self.b

    def __add__(self, other: "Affine") -> "Affine":
        return Affine(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Affine") -> "Affine":
        return Affine(self.a - other.a, self.b - other.b)

    def scaled(self, k: int) -> "Affine":
        return Affine(self.a * k, self.b * k)


NUMERATOR = "numerator"
DENOMINATOR = "denominator"


@dataclass(frozen=True)
class PochFactor:
    """``(param * q^shift(n); q^step)_length(n)`` on one side of a summand."""

    param: Param
    length: Affine
    step: int = 1
    side: str = NUMERATOR
    shift: Affine = Affine()

    def __post_init__(self) -> None:
        if self.side not in (NUMERATOR, DENOMINATOR):
            raise UsageError(f"unknown factor side {self.side!r}")
        if self.step < 1:
            raise UsageError(f"factor step must be positive, got {self.step}")

    @property
    def effective_step(self) -> int:
        return 2 * self.step if isinstance(self.param, PairSqrt) else self.step

    def run(self, n: int) -> LinearRun:
        return param_run(self.param, self.length(n), self.step, extra_q=self.shift(n), inverse=self.side == DENOMINATOR)


@dataclass(frozen=True)
class TailFactor:
    """``(base * q^shift(n); q^step)_inf`` attached to each summand."""

    base: Monomial
    shift: Affine = Affine()
    step: int = 1

    def run(self, n: int) -> LinearRun:
        return LinearRun(self.base.key, self.base.coef, self.base.q_exp + self.shift(n), self.step, None)


@dataclass(frozen=True)
class SumRange:
    start: int | None = 0
    stop: int | None = None

    def contains(self, n: int) -> bool:
        return (self.start is None or n >= self.start) and (self.stop is None or n <= self.stop)

    @property
    def finite(self) -> bool:
        return self.start is not None and self.stop is not None


NON_NEGATIVE = SumRange(0, None)
FROM_ONE = SumRange(1, None)
ALL_INTEGERS = SumRange(None, None)


@dataclass(frozen=True)
class QuadExp:
    """The q-exponent ``(A*n^2 + B*n + C) / 2``; integral for every n."""

    A: int = 0
    B: int = 0
    C: int = 0

    def __post_init__(self) -> None:
        if self.C % 2 or (self.A + self.B) % 2:
            raise UsageError(f"quadratic exponent ({self.A}, {self.B}, {self.C}) is not integral")

    def __call__(self, n: int) -> int:
        return (self.A * n * n + self.B * n + self.C) // 2


BINOM_N_2 = QuadExp(1, -1, 0)
BINOM_N1_2 = QuadExp(1, 1, 0)


@dataclass(frozen=True)
class SumSpec:
    """One parameterized sum ``sum_n term(n)`` over ``index_range``.

    ``term(n) = (-1)^n [alternating] * weight(n) * q^q_quad(n) * power_mono^n
    * divided(n) * factors(n) * tails(n)`` where ``divided=(a, b)`` contributes
    ``(a^n - b^n)/(a - b)``.
    """

    index_range: SumRange = NON_NEGATIVE
    alternating: bool = False
    q_quad: QuadExp = QuadExp()
    power_mono: Monomial = ONE
    weight: Tuple[int, ...] = (1,)
    factors: Tuple[PochFactor, ...] = ()
    tails: Tuple[TailFactor, ...] = ()
    divided: Tuple[Monomial, Monomial] | None = None
    label: str = field(default="", compare=False, repr=False)

    def weight_at(self, n: int) -> int:
        return sum(c * n**i for i, c in enumerate(self.weight))

    def runs(self, n: int) -> List[LinearRun]:
        return [f.run(n) for f in self.factors] + [t.run(n) for t in self.tails]

    def with_range(self, index_range: SumRange) -> "SumSpec":
        return replace(self, index_range=index_range)


def _divided_min(spec: SumSpec) -> int:
    if spec.divided is None:
        return 0
    a, b = spec.divided
    return min(a.q_exp, b.q_exp)


def valuation_bound(spec: SumSpec, n: int) -> int:
    """Provable lower bound on the q-valuation of summand ``n``."""

    bound = spec.q_quad(n) + n * spec.power_mono.q_exp
    if spec.divided is not None:
        bound += max(n - 1, 0) * _divided_min(spec)
    return bound + runs_shift(spec.runs(n))


@dataclass(frozen=True)
class SumCertificate:
    """Proof data that a sum has finitely many summands below any order."""

    spec: SumSpec
    forward_const: int
    backward_const: int

    def envelope(self, n: int, *, forward: bool) -> int:
        spec = self.spec
        value = spec.q_quad(n) + n * spec.power_mono.q_exp
        if forward:
            if spec.divided is not None:
                value += max(n - 1, 0) * _divided_min(spec)
            return value + self.forward_const
        return value + self.backward_const

    def indices(self, N: int) -> Iterator[int]:
        """Every index whose summand can reach q-order ``N``."""

        rng = self.spec.index_range
        if rng.finite:
            yield from range(rng.start, rng.stop + 1)
            return
        if rng.stop is None:
            n = rng.start if rng.start is not None else 0
            while True:
                yield n
                h = self.envelope(n, forward=True)
                if n >= 1 and h > N and self.envelope(n + 1, forward=True) >= h:
                    break
                n += 1
        if rng.start is None:
            n = rng.stop if rng.stop is not None else -1
            while True:
                yield n
                h = self.envelope(n, forward=False)
                if h > N and self.envelope(n - 1, forward=False) >= h:
                    break
                n -= 1

    def lower_bound(self) -> int:
        """Valuation lower bound of the whole sum."""

        rng = self.spec.index_range
        best: int | None = None
        if rng.finite:
            for n in range(rng.start, rng.stop + 1):
                g = valuation_bound(self.spec, n)
                best = g if best is None else min(best, g)
            return best if best is not None else 0
        if rng.stop is None:
            n = rng.start if rng.start is not None else 0
            while True:
                g = valuation_bound(self.spec, n)
                best = g if best is None else min(best, g)
                h = self.envelope(n, forward=True)
                if n >= 1 and h > best and self.envelope(n + 1, forward=True) >= h:
                    break
                n += 1
        if rng.start is None:
            n = rng.stop if rng.stop is not None else -1
            while True:
                g = valuation_bound(self.spec, n)
                best = g if best is None else min(best, g)
                h = self.envelope(n, forward=False)
                if h > best and self.envelope(n - 1, forward=False) >= h:
                    break
                n -= 1
        return best if best is not None else 0


def _factor_base(f: PochFactor | TailFactor) -> Tuple[int, Affine, int]:
    if isinstance(f, TailFactor):
        return f.base.q_exp, f.shift, f.step
    return f.param.m.q_exp, f.shift, f.effective_step


def _length_of(f: PochFactor | TailFactor) -> Affine | None:
    return f.length if isinstance(f, PochFactor) else None


def _check_lengths(spec: SumSpec) -> None:
    rng = spec.index_range
    for idx, f in enumerate(spec.factors):
        L = f.length
        bad = False
        if rng.finite:
            bad = any(L(n) < 0 for n in range(rng.start, rng.stop + 1))
        else:
            if rng.stop is None:
                bad = bad or L.a < 0 or (rng.start is not None and L(rng.start) < 0)
            if rng.start is None:
                bad = bad or L.a != 0 or L.b < 0
        if bad:
            raise NonEvaluable(f"factor {idx} has a negative length on the summation range", path=f"factor[{idx}]")


def _denominator_problem(spec: SumSpec, f: PochFactor, windowed: bool) -> int | None:
    """First index whose denominator run contains a non-invertible factor."""

    rng = spec.index_range
    if rng.finite:
        candidates: Iterable[int] = range(rng.start, rng.stop + 1)
    else:
        step = f.effective_step
        base_q = f.param.m.q_exp
        # the zero exponent appears only while the run's base is non-positive
        if f.shift.a > 0 and rng.stop is None:
            start = rng.start if rng.start is not None else 0
            candidates = []
            n = start
            while base_q + f.shift(n) <= 0:
                candidates.append(n)
                n += 1
        else:
            base = base_q + f.shift.b
            if base > 0 or (-base) % step:
                return None
            j = -base // step
            L = f.length
            if L.a > 0:
                start = rng.start if rng.start is not None else 0
                n = start
                while L(n) <= j:
                    n += 1
                candidates = [n]
            else:
                candidates = [rng.start if rng.start is not None else (rng.stop if rng.stop is not None else 0)]
    for n in candidates:
        if run_zero_problem(f.run(n), windowed=windowed):
            return n
    return None


def certify(spec: SumSpec, *, windowed: bool = False) -> SumCertificate:
    """Check that ``spec`` can be evaluated and its summands eventually vanish."""

    if any(isinstance(f.param, SqrtHalf) for f in spec.factors):
        raise NonEvaluable("unpaired square root parameter in sum")
    _check_lengths(spec)
    rng = spec.index_range
    if spec.divided is not None and (rng.start is None or rng.start < 0):
        raise UsageError("divided-difference sums need a non-negative range")
    for idx, f in enumerate(spec.factors):
        if f.side != DENOMINATOR:
            continue
        bad = _denominator_problem(spec, f, windowed)
        if bad is not None:
            raise NonEvaluable(
                f"denominator ({f.param.m}; q^{f.step}) has a non-invertible factor at n={bad}",
                path=f"factor[{idx}]",
            )
    if rng.finite:
        return SumCertificate(spec, 0, 0)
    forward_const = 0
    backward_const = 0
    members: List[PochFactor | TailFactor] = list(spec.factors) + list(spec.tails)
    for idx, f in enumerate(members):
        base_q, shift, step = _factor_base(f)
        length = _length_of(f)
        is_den = isinstance(f, PochFactor) and f.side == DENOMINATOR
        if rng.stop is None:
            if shift.a < 0:
                raise DivergentBound(f"factor {idx} drifts to negative q-exponents", path=f"factor[{idx}]")
            n0 = rng.start if rng.start is not None else 0
            if not is_den:
                forward_const += negative_sum(base_q + shift(n0), step, None)
        if rng.start is None:
            if shift.a != 0 or (length is not None and length.a != 0):
                raise DivergentBound(f"factor {idx} varies on a bilateral range", path=f"factor[{idx}]")
            if not is_den:
                backward_const += negative_sum(base_q + shift.b, step, length.b if length is not None else None)
    quad = spec.q_quad
    p2 = 2 * spec.power_mono.q_exp
    if rng.stop is None:
        slope = quad.B + p2 + 2 * _divided_min(spec)
        if quad.A < 0 or (quad.A == 0 and slope <= 0):
            raise DivergentBound("summand valuations do not grow for n -> +inf")
    if rng.start is None:
        if quad.A < 0 or (quad.A == 0 and -(quad.B + p2) <= 0):
            raise DivergentBound("summand valuations do not grow for n -> -inf")
    return SumCertificate(spec, forward_const, backward_const)


def _divided_terms(spec: SumSpec, n: int) -> Dict[int, Terms]:
    """``(a^n - b^n)/(a - b)`` as q-exponent -> terms."""

    out: Dict[int, Terms] = {}
    if spec.divided is None:
        out[0] = {0: 1}
        return out
    a, b = spec.divided
    for k in range(n):
        m = (a**k) * (b ** (n - 1 - k))
        terms_add_into(out.setdefault(m.q_exp, {}), {m.key: m.coef})
    return out


def _sum_term(spec: SumSpec, n: int, N: int, window: int | None) -> QSeries:
    runs = spec.runs(n)
    seed_order = N - runs_shift(runs)
    coef = spec.weight_at(n)
    if spec.alternating and n % 2:
        coef = -coef
    pm = spec.power_mono ** n
    base_q = spec.q_quad(n) + pm.q_exp
    seed: Dict[int, Terms] = {}
    for e, terms in _divided_terms(spec, n).items():
        if base_q + e > seed_order:
            continue
        scaled = {k + pm.key: c * pm.coef * coef for k, c in terms.items()}
        if window is not None:
            scaled = terms_window(scaled, window)
        if scaled:
            seed[base_q + e] = scaled
    lo = min(seed) if seed else seed_order + 1
    return apply_runs(QSeries(seed, seed_order, lo=lo), runs, window=window)


def sum_eval(
    spec: SumSpec,
    N: int,
    *,
    window: int | None = None,
    stats: MutableMapping[str, int] | None = None,
) -> QSeries:
    """Evaluate ``spec`` exactly up to q-order ``N``."""

    cert = certify(spec, windowed=window is not None)
    total = QSeries.zero(N)
    used = 0
    n_max = 0
    lo = N + 1
    for n in cert.indices(N):
        if not spec.index_range.contains(n):
            continue
        g = valuation_bound(spec, n)
        if g > N or spec.weight_at(n) == 0:
            continue
        if spec.divided is not None and n == 0:
            continue
        term = _sum_term(spec, n, N, window)
        total = qs_add(total, term)
        lo = min(lo, g)
        used += 1
        n_max = max(n_max, abs(n))
    if stats is not None and spec.label:
        stats[spec.label] = max(stats.get(spec.label, 0), n_max)
    _qtheta_event("sum", label_name=spec.label or "anon", order=N, terms=used, n_max=n_max, windowed=window is not None)
    return QSeries._wrap(dict(total.raw), N, min(lo, N + 1), 1, DEFAULT_ARITY)


# ---------------------------------------------------------------------------
# Named sums


def theta_partial_spec(m: Monomial) -> SumSpec:
    return SumSpec(NON_NEGATIVE, True, BINOM_N_2, m, label="theta_partial")


def theta_complete_spec(m: Monomial) -> SumSpec:
    return SumSpec(ALL_INTEGERS, True, BINOM_N_2, m, label="theta_complete")


def theta_partial(m: Monomial, N: int, *, window: int | None = None) -> QSeries:
    """Partial theta sum ``sum_{n>=0} (-1)^n q^binom(n,2) m^n``."""

    return sum_eval(theta_partial_spec(m), N, window=window)


def theta_complete(m: Monomial, N: int, *, window: int | None = None) -> QSeries:
    """Bilateral theta sum ``sum_{n in Z} (-1)^n q^binom(n,2) m^n``."""

    return sum_eval(theta_complete_spec(m), N, window=window)


def _as_param(p: Param | Monomial | None) -> Param | None:
    if p is None or isinstance(p, Param):
        return p
    return Mono(p)


def hypergeometric_spec(
    uppers: Sequence[Param | Monomial | None],
    lowers: Sequence[Param | Monomial | None],
    arg: Monomial,
    *,
    step: int = 1,
    label: str = "",
) -> SumSpec:
    """``sum_j (uppers; q^step)_j / (q^step, lowers; q^step)_j * arg^j``.

    ``None`` entries stand for the parameter 0 and contribute nothing.
    """

    n = Affine(1, 0)
    factors: List[PochFactor] = []
    for p in uppers:
        param = _as_param(p)
        if param is not None:
            factors.append(PochFactor(param, n, step, NUMERATOR))
    factors.append(PochFactor(Mono(mono(q=step)), n, step, DENOMINATOR))
    for p in lowers:
        param = _as_param(p)
        if param is not None:
            factors.append(PochFactor(param, n, step, DENOMINATOR))
    return SumSpec(NON_NEGATIVE, power_mono=arg, factors=tuple(factors), label=label or "hypergeometric")


def hypergeometric(
    uppers: Sequence[Param | Monomial | None],
    lowers: Sequence[Param | Monomial | None],
    arg: Monomial,
    N: int,
    *,
    step: int = 1,
    window: int | None = None,
) -> QSeries:
    return sum_eval(hypergeometric_spec(uppers, lowers, arg, step=step), N, window=window)


__all__ = [
    "Monomial",
    "mono",
    "ONE",
    "Param",
    "Mono",
    "PairSqrt",
    "SqrtHalf",
    "LinearRun",
    "negative_sum",
    "param_run",
    "runs_shift",
    "apply_runs",
    "run_zero_problem",
    "poch_finite",
    "poch_infinite",
    "poch_inverse",
    "gauss_binom",
    "Affine",
    "NUMERATOR",
    "DENOMINATOR",
    "PochFactor",
    "TailFactor",
    "SumRange",
    "NON_NEGATIVE",
    "FROM_ONE",
    "ALL_INTEGERS",
    "QuadExp",
    "BINOM_N_2",
    "BINOM_N1_2",
    "SumSpec",
    "SumCertificate",
    "valuation_bound",
    "certify",
    "sum_eval",
    "theta_partial",
    "theta_complete",
    "theta_partial_spec",
    "theta_complete_spec",
    "hypergeometric_spec",
    "hypergeometric",
]
