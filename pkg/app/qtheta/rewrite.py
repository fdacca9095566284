"""Normalization rewrites that turn stated q-series forms into evaluable ones.

Rules, applied in a fixed order until nothing changes:

* distribute inverses over products, flatten, cancel ``X * 1/X``;
* pair ``+sqrt(m)`` and ``-sqrt(m)`` parameters, then expand pairs to
  ``(m; q^(2s))``;
* combine ``(m; q^2s)_L (mq^s; q^2s)_L -> (m; q^s)_2L`` and split a
  non-invertible ``(r^2; q^2s)_L`` into ``(r; q^s)_L (-r; q^s)_L``;
* reduce ratios ``(m)_L1 / (m q^sd)_L2`` to shifted numerators;
* distribute products over sums;
* fold ``(M)_inf / (M q^-sd)_L`` into per-summand tails;
* sort everything into a canonical order.

Summation indices where a reduced length would be negative are peeled off
into a separate finite sum that keeps the original factors.
"""
from __future__ import annotations

from dataclasses import replace
from itertools import product as cartesian
from typing import Callable, Dict, List, Mapping, Sequence, Tuple

from .blocks import (
    DENOMINATOR,
    NUMERATOR,
    Affine,
    Mono,
    Monomial,
    ONE,
    PairSqrt,
    Param,
    PochFactor,
    QuadExp,
    SqrtHalf,
    SumRange,
    SumSpec,
    TailFactor,
    _denominator_problem,
)
from .errors import UsageError
from .expr import Add, Const, Expr, Inv, Mul, MonomialTerm, Neg, PochFin, PochInf, Sum
from .laurent import VARS, LaurentPoly, unpack
from .logging_utils import _qtheta_event

MAX_PASSES = 8


# ---------------------------------------------------------------------------
# flattening, inverse distribution, cancellation


def _poly_monomial(poly: LaurentPoly) -> Monomial | None:
    if not poly.is_monomial():
        return None
    ((key, coef),) = poly.terms.items()
    return Monomial(coef, 0, unpack(key))


def _scalar_part(polys: Sequence[LaurentPoly], monos: Sequence[Monomial]) -> List[Expr]:
    poly = LaurentPoly.one()
    for p in polys:
        poly = poly * p
    if poly.is_zero():
        return [Const(poly)]
    m = ONE
    for x in monos:
        m = m * x
    as_mono = _poly_monomial(poly)
    out: List[Expr] = []
    if as_mono is not None:
        m = m * as_mono
    else:
        out.append(Const(poly))
    if m != ONE:
        out.append(MonomialTerm(m))
    return out


def _cancel(factors: List[Expr]) -> List[Expr]:
    out = list(factors)
    changed = True
    while changed:
        changed = False
        for i, f in enumerate(out):
            if isinstance(f, Inv) and isinstance(f.inner, (PochInf, PochFin)):
                try:
                    j = out.index(f.inner)
                except ValueError:
                    continue
                for k in sorted((i, j), reverse=True):
                    del out[k]
                changed = True
                break
    return out


def flatten(node: Expr) -> Expr:
    if isinstance(node, Add):
        terms: List[Expr] = []
        for t in node.terms:
            t = flatten(t)
            if isinstance(t, Add):
                terms.extend(t.terms)
            elif isinstance(t, Const) and t.poly.is_zero():
                continue
            else:
                terms.append(t)
        if not terms:
            return Const(LaurentPoly.zero())
        return terms[0] if len(terms) == 1 else Add(tuple(terms))
    if isinstance(node, Neg):
        return flatten(Mul((Const(LaurentPoly.constant(-1)), node.inner)))
    if isinstance(node, Inv):
        inner = flatten(node.inner)
        if isinstance(inner, Mul):
            return flatten(Mul(tuple(Inv(f) for f in inner.factors)))
        if isinstance(inner, Inv):
            return inner.inner
        if isinstance(inner, MonomialTerm):
            return MonomialTerm(inner.mono.inverse())
        if isinstance(inner, Const):
            m = _poly_monomial(inner.poly)
            if m is not None:
                return MonomialTerm(m.inverse())
        return Inv(inner)
    if isinstance(node, Mul):
        polys: List[LaurentPoly] = []
        monos: List[Monomial] = []
        rest: List[Expr] = []
        pending = [flatten(f) for f in node.factors]
        while pending:
            f = pending.pop(0)
            if isinstance(f, Mul):
                pending = list(f.factors) + pending
            elif isinstance(f, Const):
                polys.append(f.poly)
            elif isinstance(f, MonomialTerm):
                monos.append(f.mono)
            elif isinstance(f, PochFin) and f.length == 0:
                continue
            else:
                rest.append(f)
        rest = _cancel(rest)
        factors = _scalar_part(polys, monos) + rest
        if any(isinstance(f, Const) and f.poly.is_zero() for f in factors):
            return Const(LaurentPoly.zero())
        if not factors:
            return Const(LaurentPoly.one())
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))
    if isinstance(node, PochFin) and node.length == 0:
        return Const(LaurentPoly.one())
    if isinstance(node, Sum):
        rng = node.spec.index_range
        if rng.finite and rng.start > rng.stop:
            return Const(LaurentPoly.zero())
    return node


def distribute(node: Expr) -> Expr:
    """Expand products of sums into sums of products."""

    if isinstance(node, Add):
        return Add(tuple(distribute(t) for t in node.terms))
    if isinstance(node, Mul):
        options: List[Tuple[Expr, ...]] = []
        for f in node.factors:
            f = distribute(f)
            options.append(f.terms if isinstance(f, Add) else (f,))
        if all(len(o) == 1 for o in options):
            return Mul(tuple(o[0] for o in options))
        return Add(tuple(Mul(combo) for combo in cartesian(*options)))
    return node


# ---------------------------------------------------------------------------
# sum-level helpers


def map_sums(node: Expr, fn: Callable[[SumSpec], Expr]) -> Expr:
    if isinstance(node, Sum):
        return fn(node.spec)
    if isinstance(node, Add):
        return Add(tuple(map_sums(t, fn) for t in node.terms))
    if isinstance(node, Mul):
        return Mul(tuple(map_sums(f, fn) for f in node.factors))
    if isinstance(node, Neg):
        return Neg(map_sums(node.inner, fn))
    if isinstance(node, Inv):
        return Inv(map_sums(node.inner, fn))
    return node


def _q_offset(a: Monomial, b: Monomial, step: int) -> int | None:
    """``d`` with ``b = a * q^(step*d)``, or None."""

    if a.coef != b.coef or a.var_exps != b.var_exps:
        return None
    diff = b.q_exp - a.q_exp
    if diff % step:
        return None
    return diff // step


def _peel_count(spec: SumSpec, ok: Callable[[int], bool]) -> int | None:
    """Number of initial indices failing ``ok``; None if the failure is not initial."""

    rng = spec.index_range
    if rng.start is None:
        return 0 if ok(0) and ok(-1) and ok(1) else None
    n = rng.start
    while not ok(n):
        n += 1
        if rng.stop is not None and n > rng.stop:
            return None
        if n - rng.start > 256:
            return None
    return n - rng.start


def _split_range(spec: SumSpec, count: int) -> Tuple[SumSpec | None, SumSpec]:
    rng = spec.index_range
    if count == 0:
        return None, spec
    start = rng.start
    peel = spec.with_range(SumRange(start, start + count - 1))
    main = spec.with_range(SumRange(start + count, rng.stop))
    return peel, main


# R3 ----------------------------------------------------------------------


def _pair_params(items: List, param_of, rebuild) -> List:
    out = list(items)
    changed = True
    while changed:
        changed = False
        for i, a in enumerate(out):
            pa = param_of(a)
            if not isinstance(pa, SqrtHalf):
                continue
            for j in range(len(out)):
                if j == i:
                    continue
                pb = param_of(out[j])
                if (
                    isinstance(pb, SqrtHalf)
                    and pb.m == pa.m
                    and pb.sign == -pa.sign
                    and rebuild(out[j], pa) == rebuild(a, pa)
                ):
                    merged = rebuild(a, PairSqrt(pa.m))
                    out = [x for k, x in enumerate(out) if k not in (i, j)]
                    out.append(merged)
                    changed = True
                    break
            if changed:
                break
    return out


def pair_roots(spec: SumSpec) -> Expr:
    factors = _pair_params(
        list(spec.factors),
        lambda f: f.param,
        lambda f, p: replace(f, param=p),
    )
    return Sum(replace(spec, factors=tuple(factors)))


def _pair_mul(node: Expr) -> Expr:
    if isinstance(node, Add):
        return Add(tuple(_pair_mul(t) for t in node.terms))
    if not isinstance(node, Mul):
        return node

    def param_of(f: Expr) -> Param | None:
        if isinstance(f, PochFin):
            return f.param
        if isinstance(f, Inv) and isinstance(f.inner, PochFin):
            return f.inner.param
        return None

    def rebuild(f: Expr, p: Param) -> Expr:
        if isinstance(f, PochFin):
            return replace(f, param=p)
        return Inv(replace(f.inner, param=p))

    return Mul(tuple(_pair_params(list(node.factors), param_of, rebuild)))


def _pair_nested(node: Expr) -> Expr:
    if isinstance(node, Mul):
        return _pair_mul(Mul(tuple(_pair_nested(f) for f in node.factors)))
    if isinstance(node, Add):
        return Add(tuple(_pair_nested(t) for t in node.terms))
    if isinstance(node, Neg):
        return Neg(_pair_nested(node.inner))
    if isinstance(node, Inv):
        return Inv(_pair_nested(node.inner))
    return node


def pair_all_roots(node: Expr) -> Expr:
    """Merge every ``+sqrt``/``-sqrt`` factor pair into a PairSqrt; nothing else moves."""

    return _pair_nested(map_sums(node, pair_roots))


def expand_pairs(spec: SumSpec) -> Expr:
    factors = tuple(
        replace(f, param=Mono(f.param.m), step=2 * f.step) if isinstance(f.param, PairSqrt) else f
        for f in spec.factors
    )
    return Sum(replace(spec, factors=factors))


def _expand_pairs_node(node: Expr) -> Expr:
    if isinstance(node, PochFin) and isinstance(node.param, PairSqrt):
        return PochFin(Mono(node.param.m), node.length, 2 * node.step)
    if isinstance(node, Add):
        return Add(tuple(_expand_pairs_node(t) for t in node.terms))
    if isinstance(node, Mul):
        return Mul(tuple(_expand_pairs_node(f) for f in node.factors))
    if isinstance(node, Inv):
        return Inv(_expand_pairs_node(node.inner))
    if isinstance(node, Neg):
        return Neg(_expand_pairs_node(node.inner))
    if isinstance(node, Sum):
        return expand_pairs(node.spec)
    return node


# R4 ----------------------------------------------------------------------


def combine_squares(spec: SumSpec) -> Expr:
    """``(m; q^2s)_L (m q^s; q^2s)_L -> (m; q^s)_2L`` on either side."""

    factors = list(spec.factors)
    changed = True
    while changed:
        changed = False
        for i, a in enumerate(factors):
            if not isinstance(a.param, Mono) or a.step % 2:
                continue
            half = a.step // 2
            for j, b in enumerate(factors):
                if (
                    j != i
                    and isinstance(b.param, Mono)
                    and b.step == a.step
                    and b.side == a.side
                    and b.length == a.length
                    and b.shift == a.shift
                    and _q_offset(a.param.m, b.param.m, half) == 1
                ):
                    merged = PochFactor(a.param, a.length.scaled(2), half, a.side, a.shift)
                    factors = [f for k, f in enumerate(factors) if k not in (i, j)] + [merged]
                    changed = True
                    break
            if changed:
                break
    return Sum(replace(spec, factors=tuple(factors)))


def split_squares(spec: SumSpec) -> Expr:
    """Split a non-invertible denominator ``(r^2; q^2s)_L`` into ``(r)_L (-r)_L``."""

    factors = list(spec.factors)
    changed = True
    while changed:
        changed = False
        current = replace(spec, factors=tuple(factors))
        for i, f in enumerate(factors):
            if f.side != DENOMINATOR or not isinstance(f.param, Mono) or f.step % 2 or f.shift != Affine():
                continue
            root = f.param.m.sqrt()
            if root is None or _denominator_problem(current, f, False) is None:
                continue
            half = f.step // 2
            factors[i : i + 1] = [
                PochFactor(Mono(root), f.length, half, DENOMINATOR),
                PochFactor(Mono(root.scaled(-1)), f.length, half, DENOMINATOR),
            ]
            changed = True
            break
    return Sum(replace(spec, factors=tuple(factors)))


# R2 ----------------------------------------------------------------------


def _plain(f: PochFactor, side: str) -> bool:
    return f.side == side and isinstance(f.param, Mono) and f.shift == Affine()


def reduce_ratios(spec: SumSpec) -> Expr:
    """``(m; q^s)_L1 / (m q^sd; q^s)_L2 -> (m)_d (m q^(s(d+L2)); q^s)_(L1-d-L2)``."""

    for i, num in enumerate(spec.factors):
        if not _plain(num, NUMERATOR):
            continue
        for j, den in enumerate(spec.factors):
            if not _plain(den, DENOMINATOR) or den.step != num.step:
                continue
            d = _q_offset(num.param.m, den.param.m, num.step)
            if d is None or d < 0:
                continue
            if d > 0 and _denominator_problem(spec, den, False) is None:
                continue
            s = num.step
            rest = num.length - den.length - Affine(0, d)
            if rest.a < 0 or (spec.index_range.start is None and rest.a):
                continue
            count = _peel_count(spec, lambda n: rest(n) >= 0)
            if count is None:
                continue
            peel, main = _split_range(spec, count)
            m = num.param.m
            new_factors = [f for k, f in enumerate(spec.factors) if k not in (i, j)]
            if d > 0:
                new_factors.append(PochFactor(Mono(m), Affine(0, d), s, NUMERATOR))
            if rest != Affine():
                shift = Affine(s * den.length.a, s * (d + den.length.b))
                new_factors.append(PochFactor(Mono(m), rest, s, NUMERATOR, shift))
            main = replace(main, factors=tuple(new_factors))
            _qtheta_event("rewrite", rule="ratio", base=str(m), offset=d, peeled=count)
            reduced = reduce_ratios(main)
            if peel is None:
                return reduced
            return Add((Sum(peel), reduced))
    return Sum(spec)


# R1 ----------------------------------------------------------------------


def _fold_candidates(spec: SumSpec, pochs: Sequence[Tuple[int, PochInf]]):
    for j, den in enumerate(spec.factors):
        if not _plain(den, DENOMINATOR):
            continue
        if _denominator_problem(spec, den, False) is None:
            continue
        for pi, p in pochs:
            if p.step != den.step:
                continue
            d = _q_offset(den.param.m, p.mono, den.step)
            if d is None:
                continue
            rank = (0 if d == 0 else 1 if d > 0 else 2, abs(d))
            yield rank, j, pi, d


def _fold_once(node: Mul) -> Expr | None:
    factors = list(node.factors)
    pochs = [(i, f) for i, f in enumerate(factors) if isinstance(f, PochInf)]
    if not pochs:
        return None
    for si, s_node in enumerate(factors):
        if not isinstance(s_node, Sum):
            continue
        spec = s_node.spec
        candidates = sorted(_fold_candidates(spec, pochs), key=lambda c: c[0])
        for _, j, pi, d in candidates:
            den = spec.factors[j]
            M = factors[pi].mono  # type: ignore[union-attr]
            s = den.step
            L = den.length
            rest_factors = [f for k, f in enumerate(spec.factors) if k != j]
            if d >= 0:
                if L.a < 0 or (spec.index_range.start is None and L.a):
                    continue
                count = _peel_count(spec, lambda n: L(n) >= d)
                if count is None:
                    continue
                tail = TailFactor(M, Affine(s * L.a, s * (L.b - d)), s)
                if d > 0:
                    rest_factors.append(PochFactor(Mono(den.param.m), Affine(0, d), s, DENOMINATOR))
            else:
                count = 0
                tail = TailFactor(den.param.m, Affine(s * L.a, s * L.b), s)
                rest_factors.append(PochFactor(Mono(M), Affine(0, -d), s, NUMERATOR))
            peel, main = _split_range(spec, count)
            main = replace(main, factors=tuple(rest_factors), tails=main.tails + (tail,))
            others = [f for k, f in enumerate(factors) if k not in (si, pi)]
            folded = Mul(tuple(others + [Sum(main)]))
            _qtheta_event("rewrite", rule="fold", base=str(M), offset=d, peeled=count)
            if peel is None:
                return folded
            kept = [f for k, f in enumerate(factors) if k != si]
            return Add((folded, Mul(tuple(kept + [Sum(peel)]))))
    return None


def fold_products(node: Expr) -> Expr:
    if isinstance(node, Add):
        return Add(tuple(fold_products(t) for t in node.terms))
    if isinstance(node, Mul):
        folded = _fold_once(node)
        if folded is None:
            return node
        return fold_products(flatten(folded))
    return node


# canonical order -----------------------------------------------------------


def canonical(node: Expr) -> Expr:
    if isinstance(node, Add):
        return Add(tuple(sorted((canonical(t) for t in node.terms), key=repr)))
    if isinstance(node, Mul):
        return Mul(tuple(sorted((canonical(f) for f in node.factors), key=repr)))
    if isinstance(node, Inv):
        return Inv(canonical(node.inner))
    if isinstance(node, Neg):
        return Neg(canonical(node.inner))
    if isinstance(node, Sum):
        spec = node.spec
        return Sum(
            replace(
                spec,
                factors=tuple(sorted(spec.factors, key=repr)),
                tails=tuple(sorted(spec.tails, key=repr)),
            )
        )
    return node


def _pass(node: Expr) -> Expr:
    node = flatten(node)
    node = _pair_mul(map_sums(node, pair_roots))
    node = flatten(_expand_pairs_node(node))
    node = map_sums(node, combine_squares)
    node = map_sums(node, split_squares)
    node = flatten(map_sums(node, reduce_ratios))
    node = flatten(distribute(node))
    node = flatten(fold_products(node))
    node = flatten(distribute(node))
    return canonical(node)


def rewrite_normalize(node: Expr) -> Expr:
    """Apply all rewrite rules until a fixpoint; returns a canonical tree."""

    current = node
    for _ in range(MAX_PASSES):
        nxt = _pass(current)
        if nxt == current:
            return nxt
        current = nxt
    return current


# ---------------------------------------------------------------------------
# substitutions


def subst_monomial(m: Monomial, bindings: Mapping[int, Monomial]) -> Monomial:
    out = Monomial(m.coef, m.q_exp, tuple(0 if i in bindings else e for i, e in enumerate(m.var_exps)))
    for index, target in bindings.items():
        power = m.var_exps[index]
        if power:
            out = out * (target**power)
    return out


def _subst_param(p: Param, bindings: Mapping[int, Monomial]) -> Param:
    return replace(p, m=subst_monomial(p.m, bindings))


def _subst_spec(spec: SumSpec, bindings: Mapping[int, Monomial]) -> SumSpec:
    divided = spec.divided
    if divided is not None:
        divided = (subst_monomial(divided[0], bindings), subst_monomial(divided[1], bindings))
    return replace(
        spec,
        power_mono=subst_monomial(spec.power_mono, bindings),
        divided=divided,
        factors=tuple(replace(f, param=_subst_param(f.param, bindings)) for f in spec.factors),
        tails=tuple(replace(t, base=subst_monomial(t.base, bindings)) for t in spec.tails),
    )


def _resolve_bindings(bindings: Mapping[str, Monomial]) -> Dict[int, Monomial]:
    out: Dict[int, Monomial] = {}
    for name, target in bindings.items():
        if name not in VARS:
            raise UsageError(f"unknown variable {name!r} in bindings")
        out[VARS.index(name)] = target
    return out


def substitute(node: Expr, bindings: Mapping[str, Monomial]) -> Expr:
    """Replace variables by monomials (which may carry powers of q)."""

    index_bindings = _resolve_bindings(bindings)
    return _substitute(node, index_bindings)


def _substitute(node: Expr, b: Mapping[int, Monomial]) -> Expr:
    if isinstance(node, Const):
        terms: List[Expr] = []
        for key, coef in node.poly.terms.items():
            terms.append(MonomialTerm(subst_monomial(Monomial(coef, 0, unpack(key)), b)))
        if not terms:
            return node
        return terms[0] if len(terms) == 1 else Add(tuple(terms))
    if isinstance(node, MonomialTerm):
        return MonomialTerm(subst_monomial(node.mono, b))
    if isinstance(node, Add):
        return Add(tuple(_substitute(t, b) for t in node.terms))
    if isinstance(node, Mul):
        return Mul(tuple(_substitute(f, b) for f in node.factors))
    if isinstance(node, Neg):
        return Neg(_substitute(node.inner, b))
    if isinstance(node, Inv):
        return Inv(_substitute(node.inner, b))
    if isinstance(node, PochInf):
        return PochInf(subst_monomial(node.mono, b), node.step)
    if isinstance(node, PochFin):
        return PochFin(_subst_param(node.param, b), node.length, node.step)
    if isinstance(node, Sum):
        return Sum(_subst_spec(node.spec, b))
    raise UsageError(f"cannot substitute into {type(node).__name__}")


def _rescale_mono(m: Monomial, k: int) -> Monomial:
    return Monomial(m.coef, m.q_exp * k, m.var_exps)


def rescale_q(node: Expr, k: int) -> Expr:
    """Replace q by q^k throughout."""

    if k < 1:
        raise UsageError(f"q-power substitution needs k >= 1, got {k}")
    if isinstance(node, Const):
        return node
    if isinstance(node, MonomialTerm):
        return MonomialTerm(_rescale_mono(node.mono, k))
    if isinstance(node, Add):
        return Add(tuple(rescale_q(t, k) for t in node.terms))
    if isinstance(node, Mul):
        return Mul(tuple(rescale_q(f, k) for f in node.factors))
    if isinstance(node, Neg):
        return Neg(rescale_q(node.inner, k))
    if isinstance(node, Inv):
        return Inv(rescale_q(node.inner, k))
    if isinstance(node, PochInf):
        return PochInf(_rescale_mono(node.mono, k), node.step * k)
    if isinstance(node, PochFin):
        return PochFin(replace(node.param, m=_rescale_mono(node.param.m, k)), node.length, node.step * k)
    if isinstance(node, Sum):
        spec = node.spec
        quad = spec.q_quad
        divided = spec.divided
        if divided is not None:
            divided = (_rescale_mono(divided[0], k), _rescale_mono(divided[1], k))
        return Sum(
            replace(
                spec,
                q_quad=QuadExp(quad.A * k, quad.B * k, quad.C * k),
                power_mono=_rescale_mono(spec.power_mono, k),
                divided=divided,
                factors=tuple(
                    replace(f, param=replace(f.param, m=_rescale_mono(f.param.m, k)), step=f.step * k, shift=f.shift.scaled(k))
                    for f in spec.factors
                ),
                tails=tuple(
                    replace(t, base=_rescale_mono(t.base, k), step=t.step * k, shift=t.shift.scaled(k)) for t in spec.tails
                ),
            )
        )
    raise UsageError(f"cannot rescale {type(node).__name__}")


__all__ = [
    "rewrite_normalize",
    "flatten",
    "distribute",
    "map_sums",
    "pair_roots",
    "pair_all_roots",
    "expand_pairs",
    "combine_squares",
    "split_squares",
    "reduce_ratios",
    "fold_products",
    "canonical",
    "substitute",
    "subst_monomial",
    "rescale_q",
]
