"""The identity catalog.

Each :class:`Identity` records both sides as stated, an optional clearing
multiplier applied to both sides, and optional hand-cleared replacements for
sides the rewrite rules cannot clear on their own.  ``check`` evaluates the
normal forms ``rewrite_normalize(cleared side)``; the windowed oracle
evaluates ``multiplier * stated side`` directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, List, Tuple

from . import config
from .blocks import (
    ALL_INTEGERS,
    BINOM_N1_2,
    BINOM_N_2,
    DENOMINATOR,
    FROM_ONE,
    NON_NEGATIVE,
    NUMERATOR,
    ONE,
    Affine,
    Mono,
    Monomial,
    PairSqrt,
    Param,
    PochFactor,
    QuadExp,
    SqrtHalf,
    SumRange,
    SumSpec,
    hypergeometric_spec,
    mono,
)
from .expr import Add, Const, Expr, Inv, Mul, MonomialTerm, Neg, PochInf, Sum, const
from .laurent import parse_laurent
from .rewrite import rewrite_normalize, substitute

STATED = "stated"
CLEARED = "cleared"
SPECIALIZATION = "specialization"
SIDES = ("lhs", "rhs")


@dataclass(frozen=True)
class Provenance:
    kind: str = STATED
    detail: str = ""
    bindings: Tuple[Tuple[str, str], ...] = ()


@dataclass(frozen=True)
class Identity:
    id: str
    title: str
    reference: str
    stated_lhs: Expr
    stated_rhs: Expr
    multiplier: Expr | None = None
    cleared_lhs: Expr | None = None
    cleared_rhs: Expr | None = None
    default_order: int = config.DEFAULT_ORDER
    provenance: Provenance = Provenance()
    base_div: int = 1
    normalize: bool = True
    tags: Tuple[str, ...] = ()
    paper_eq: str = ""

    def _clear(self, side: Expr, override: Expr | None) -> Expr:
        if override is not None:
            return override
        if self.multiplier is None:
            return side
        return Mul((self.multiplier, side))

    @property
    def oracle_lhs(self) -> Expr:
        return self.stated_lhs if self.multiplier is None else Mul((self.multiplier, self.stated_lhs))

    @property
    def oracle_rhs(self) -> Expr:
        return self.stated_rhs if self.multiplier is None else Mul((self.multiplier, self.stated_rhs))

    @cached_property
    def lhs(self) -> Expr:
        side = self._clear(self.stated_lhs, self.cleared_lhs)
        return rewrite_normalize(side) if self.normalize else side

    @cached_property
    def rhs(self) -> Expr:
        side = self._clear(self.stated_rhs, self.cleared_rhs)
        return rewrite_normalize(side) if self.normalize else side

    def side(self, name: str) -> Expr:
        if name == "lhs":
            return self.lhs
        if name == "rhs":
            return self.rhs
        raise KeyError(name)

    def stated_side(self, name: str) -> Expr:
        if name == "lhs":
            return self.stated_lhs
        if name == "rhs":
            return self.stated_rhs
        raise KeyError(name)


# ---------------------------------------------------------------------------
# building blocks

q = mono(q=1)
x = mono(x=1)
y = mono(y=1)
u = mono(u=1)
N1 = Affine(1, 0)


def m(coef: object = 1, **exps: int) -> Monomial:
    return mono(coef, **exps)


def inf(*monos: Monomial, step: int = 1) -> List[Expr]:
    return [PochInf(mo, step) for mo in monos]


def inv_inf(*monos: Monomial, step: int = 1) -> List[Expr]:
    return [Inv(PochInf(mo, step)) for mo in monos]


def _param(p: Param | Monomial) -> Param:
    return p if isinstance(p, Param) else Mono(p)


def num(p: Param | Monomial, length: Affine = N1, step: int = 1, shift: Affine = Affine()) -> PochFactor:
    return PochFactor(_param(p), length, step, NUMERATOR, shift)


def den(p: Param | Monomial, length: Affine = N1, step: int = 1, shift: Affine = Affine()) -> PochFactor:
    return PochFactor(_param(p), length, step, DENOMINATOR, shift)


def series(*factors: PochFactor, power: Monomial = ONE, label: str = "") -> Sum:
    return Sum(SumSpec(power_mono=power, factors=tuple(factors), label=label))


def prod(*parts: Expr | List[Expr]) -> Mul:
    flat: List[Expr] = []
    for p in parts:
        if isinstance(p, list):
            flat.extend(p)
        else:
            flat.append(p)
    return Mul(tuple(flat))


def poly(text: str) -> Const:
    return Const(parse_laurent(text))


def half_pair(mo: Monomial) -> List[Param]:
    return [SqrtHalf(mo, 1), SqrtHalf(mo, -1)]


def theta_partial_sum(arg: Monomial, label: str = "theta_partial") -> Sum:
    return Sum(SumSpec(NON_NEGATIVE, True, BINOM_N_2, arg, label=label))


def theta_tail_sum(arg: Monomial, label: str) -> Sum:
    """``sum_{n>=1} (-1)^n q^binom(n,2) arg^n``."""

    return Sum(SumSpec(FROM_ONE, True, BINOM_N_2, arg, label=label))


def L_sum(a: Monomial, b: Monomial, label: str = "L") -> Sum:
    """``sum_{n>=1} (-1)^n q^binom(n,2) (a^n - b^n)/(a - b)``."""

    return Sum(SumSpec(FROM_ONE, True, BINOM_N_2, ONE, divided=(a, b), label=label))


def G_expr(a: Monomial, b: Monomial, label: str = "G") -> Expr:
    """``(q, qa, qb)_inf sum_n (ab)_2n q^n / (q, qa, qb, ab)_n``."""

    ab = a * b
    qa, qb = a.times_q(1), b.times_q(1)
    return prod(
        inf(q, qa, qb),
        series(num(ab, Affine(2, 0)), den(q), den(qa), den(qb), den(ab), power=q, label=label),
    )


def F_expr() -> Expr:
    return Add((L_sum(x, y, "L"), G_expr(x, y, "G")))


def warnaar_lhs() -> Expr:
    return Add((const(1), theta_tail_sum(x, "warnaar_x"), theta_tail_sum(y, "warnaar_y")))


def warnaar_rhs() -> Expr:
    xy_q = m(1, q=-1, x=1, y=1)
    return prod(
        inf(q, x, y),
        series(num(xy_q, Affine(2, 0)), den(q), den(x), den(y), den(m(1, x=1, y=1)), power=q, label="warnaar"),
    )


def heine_form(arg: Monomial, label: str) -> Expr:
    """``(q, a)_inf 2phi1(0, 0; a; q, q)``."""

    return prod(inf(q, arg), Sum(hypergeometric_spec([None, None], [arg], q, label=label)))


# ---------------------------------------------------------------------------
# catalog entries


def _theta_entries(D: int) -> List[Identity]:
    xy = m(1, x=1, y=1)
    xy_q = m(1, q=-1, x=1, y=1)
    x_q = m(1, q=-1, x=1)
    x2_q = m(1, q=-1, x=2)
    return [
        Identity(
            "jtp",
            "Jacobi triple product",
            "Jacobi triple product identity",
            Sum(SumSpec(ALL_INTEGERS, True, BINOM_N_2, x, label="theta_complete")),
            prod(inf(q, x, m(1, q=1, x=-1))),
            paper_eq="Eq. (1)",
            default_order=D,
        ),
        Identity(
            "jacobi-cube",
            "Cube of the Euler product",
            "Jacobi's identity for (q;q)_inf^3",
            Sum(SumSpec(FROM_ONE, True, BINOM_N_2, ONE, weight=(-1, 2), label="jacobi_cube")),
            prod(const(-1), inf(q, q, q)),
            paper_eq="Eq. (2)",
            default_order=D,
        ),
        Identity(
            "warnaar-sum",
            "Sum of two partial theta series",
            "Warnaar sum formula",
            warnaar_lhs(),
            warnaar_rhs(),
            paper_eq="Eq. (3)",
            default_order=D,
            provenance=Provenance(CLEARED, "ratio reduction (xy/q)_2n/(xy)_n and product folding"),
        ),
        Identity(
            "ptheta-heine",
            "Partial theta series via Heine's transformation",
            "partial theta as (q,x)_inf 2phi1(0,0;x;q,q)",
            theta_partial_sum(x),
            heine_form(x, "heine_x"),
            paper_eq="Eq. (5)",
            default_order=D,
            provenance=Provenance(CLEARED, "product folding (x)_inf/(x)_n -> (xq^n)_inf"),
        ),
        Identity(
            "aw-product",
            "Product of two partial theta series",
            "Andrews-Warnaar product formula",
            prod(theta_partial_sum(x, "theta_x"), theta_partial_sum(y, "theta_y")),
            prod(
                inf(q, x, y),
                series(num(xy_q, Affine(2, 0)), den(q), den(x), den(y), den(xy_q), power=q, label="andrews_warnaar"),
            ),
            paper_eq="Eq. (6)",
            default_order=D,
            provenance=Provenance(CLEARED, "ratio reduction (xy/q)_2n/(xy/q)_n and product folding"),
        ),
        Identity(
            "aw-4phi3",
            "Product formula in 4phi3 form",
            "Gasper-Rahman product formula with a -> 0",
            prod(heine_form(x, "heine_x"), heine_form(y, "heine_y")),
            prod(
                inf(q, x, y),
                Sum(hypergeometric_spec(half_pair(xy_q) + half_pair(xy), [x, y, xy_q], q, label="aw_4phi3")),
            ),
            paper_eq="Eq. (8)",
            default_order=D,
            provenance=Provenance(CLEARED, "paired square roots, square combination, ratio reduction"),
        ),
        Identity(
            "ptheta-quadratic",
            "Partial theta series with base q^2 denominators",
            "Andrews-Warnaar product formula at y=-q",
            theta_partial_sum(x),
            prod(
                inf(x),
                inf(q, step=2),
                series(
                    num(m(-1, x=1), Affine(2, 0)),
                    den(m(1, q=2), step=2),
                    den(m(1, x=2), step=2),
                    power=q,
                    label="ptheta_quadratic",
                ),
            ),
            paper_eq="Eq. (9)",
            default_order=D,
            provenance=Provenance(CLEARED, "square split (x^2;q^2)_n, ratio reduction and folding"),
        ),
        Identity(
            "ptheta-shift",
            "Partial theta series from the sum formula at y=x/q",
            "Warnaar sum formula at y=x/q",
            theta_partial_sum(x),
            prod(
                inf(q, x, x),
                series(
                    num(m(1, q=-2, x=2), Affine(2, 0)),
                    den(q),
                    den(x),
                    den(x_q),
                    den(x2_q),
                    power=q,
                    label="ptheta_shift",
                ),
            ),
            paper_eq="Eq. (10)",
            default_order=D,
            provenance=Provenance(CLEARED, "ratio reduction and offset folding (x)_inf/(x/q)_n"),
        ),
    ]


def _difference_entries(D: int) -> List[Identity]:
    xy = m(1, x=1, y=1)
    qxy = m(1, q=1, x=1, y=1)
    y_x = m(1, x=-1, y=1)
    qy_x = m(1, q=1, x=-1, y=1)
    q_x = m(1, q=1, x=-1)
    F_shift = substitute(F_expr(), {"x": m(1, q=2, x=1), "y": m(1, q=2, y=1)})
    return [
        Identity(
            "main-difference",
            "Difference of two partial theta series",
            "difference theorem for partial theta series",
            L_sum(x, y, "difference"),
            prod(const(-1), G_expr(x, y, "difference_rhs")),
            paper_eq="Eq. (12)/(16)",
            default_order=D,
            provenance=Provenance(CLEARED, "ratio reduction (xy)_2n/(xy)_n"),
        ),
        Identity(
            "sc-b1",
            "Sears-Carlitz extension at b=1",
            "nonterminating Sears-Carlitz at b=1, a=y/x, multiplied out",
            prod(inf(q, x, q_x)),
            Add(
                (
                    prod(
                        inf(q, y, q_x),
                        Sum(hypergeometric_spec(half_pair(y_x) + half_pair(qy_x), [y, q_x, qy_x], q, label="sc_first")),
                    ),
                    prod(
                        poly("y - x"),
                        inf(q, x.times_q(1), y.times_q(1)),
                        Sum(
                            hypergeometric_spec(
                                half_pair(xy) + half_pair(xy.times_q(1)),
                                [x.times_q(1), y.times_q(1), xy],
                                q,
                                label="sc_second",
                            )
                        ),
                    ),
                )
            ),
            paper_eq="Eq. (15)",
            default_order=D,
        ),
        Identity(
            "recurrence-xy",
            "Recurrence for the left side of the sum formula",
            "recurrence for (x^n - y^n)/(x - y)",
            warnaar_lhs(),
            Add(
                (
                    Neg(L_sum(x.times_q(-1), y.times_q(-1), "L_shift_down")),
                    prod(MonomialTerm(qxy), L_sum(x.times_q(1), y.times_q(1), "L_shift_up")),
                )
            ),
            paper_eq="Eq. (17)",
            default_order=D,
        ),
        Identity(
            "rhs-recurrence",
            "Recurrence for the right side of the sum formula",
            "Pochhammer difference lemma applied to the sum formula",
            warnaar_rhs(),
            Add(
                (
                    G_expr(x.times_q(-1), y.times_q(-1), "G_shift_down"),
                    Neg(prod(MonomialTerm(qxy), G_expr(x.times_q(1), y.times_q(1), "G_shift_up"))),
                )
            ),
            paper_eq="Eq. (18)",
            default_order=D,
        ),
        Identity(
            "qdiff-F",
            "F(x,y) = L(x,y) + G(x,y) vanishes",
            "q-difference equation solved by F = 0",
            F_expr(),
            const(0),
            paper_eq="Eq. (19)",
            default_order=D,
        ),
        Identity(
            "qdiff-F-functional",
            "F(x,y) - q^3 xy F(xq^2, yq^2) vanishes",
            "q-difference equation F(x,y) = q^3 xy F(xq^2, yq^2)",
            Add((F_expr(), Neg(prod(MonomialTerm(m(1, q=3, x=1, y=1)), F_shift)))),
            const(0),
            paper_eq="Eq. (19)",
            default_order=D,
        ),
    ]


def _corollary_entries(D: int, S: int) -> List[Identity]:
    q2 = m(1, q=2)
    q4 = m(1, q=4)
    q8 = m(1, q=8)
    xq = m(1, q=1, x=1)
    mx_q = m(-1, q=-1, x=1)
    x2 = m(1, x=2)
    x2_q = m(1, q=-1, x=2)
    return [
        Identity(
            "quad-transform",
            "Quadratic transformation 2phi1 (base q^2) to 3phi2",
            "quadratic transformation from the y=-q and y=x/q cases",
            Sum(hypergeometric_spec([m(-1, x=1), m(-1, q=1, x=1)], [x2], q, step=2, label="quad_2phi1")),
            prod(
                inf(x),
                inf(q2, step=2),
                Sum(hypergeometric_spec(half_pair(x2_q) + [m(-1, q=-1, x=1)], [x, x2_q], q, label="quad_3phi2")),
            ),
            multiplier=prod(inf(x, x2)),
            paper_eq="Eq. (11)",
            default_order=S,
            provenance=Provenance(CLEARED, "both sides multiplied by (x;q)_inf (x^2;q)_inf"),
        ),
        Identity(
            "double-square",
            "Double-square partial theta series",
            "difference theorem at y=-x",
            Sum(SumSpec(NON_NEGATIVE, False, QuadExp(4, 0, 0), x, label="double_square")),
            prod(
                inf(q),
                inf(xq, step=2),
                series(
                    num(mx_q, Affine(2, 0)),
                    den(q),
                    den(mx_q),
                    den(xq, step=2),
                    power=q,
                    label="double_square_rhs",
                ),
            ),
            paper_eq="Eq. (20)",
            default_order=D,
            provenance=Provenance(CLEARED, "ratio reduction (-x/q)_2n/(-x/q)_n"),
        ),
        Identity(
            "gauss-sum",
            "Gauss triangular-number sum",
            "Gauss' formula",
            Sum(SumSpec(NON_NEGATIVE, False, BINOM_N1_2, ONE, label="gauss")),
            prod(inf(q2, q2, step=2), inv_inf(q)),
            multiplier=prod(inf(q)),
            paper_eq="§3 Gauss formula",
            default_order=D,
            provenance=Provenance(CLEARED, "both sides multiplied by (q;q)_inf"),
        ),
        Identity(
            "q-kummer-cor",
            "q-Kummer case of the double-square identity",
            "double-square identity at x=q^2",
            prod(
                Add((const(1), MonomialTerm(m(-1, q=1)))),
                inf(q8, q8, step=8),
                inf(q2, step=2),
                inv_inf(q4, step=4),
                inv_inf(q, q),
            ),
            Sum(hypergeometric_spec([m(-1, q=2), m(-1, q=1)], [m(1, q=3)], q, step=2, label="q_kummer")),
            multiplier=prod(inf(q4, step=4), inf(q, q)),
            paper_eq="§3 q-Kummer corollary",
            default_order=D,
            provenance=Provenance(CLEARED, "both sides multiplied by (q^4;q^4)_inf (q;q)_inf^2"),
        ),
        Identity(
            "weighted-binom",
            "Weighted Gaussian-binomial identity",
            "difference theorem at x=1, y -> 1 with the cube identity",
            prod(
                Sum(SumSpec(FROM_ONE, True, BINOM_N1_2, ONE, weight=(0, -1), label="weighted")),
                inv_inf(q, q, q),
            ),
            Sum(
                SumSpec(
                    FROM_ONE,
                    power_mono=q,
                    factors=(num(q, Affine(2, -1)), den(q), den(q), den(q), den(q, Affine(1, -1))),
                    label="weighted_binom",
                )
            ),
            multiplier=prod(inf(q, q, q)),
            paper_eq="§3 weighted Gaussian-binomial identity",
            default_order=D,
            provenance=Provenance(CLEARED, "both sides multiplied by (q;q)_inf^3"),
        ),
        Identity(
            "octonic",
            "Octonic transformation",
            "partial theta at q -> q^4, x -> -xq^2 against the double-square identity",
            Sum(hypergeometric_spec([m(1, q=2, x=1), m(1, q=6, x=1)], [m(1, q=4, x=2)], q4, step=8, label="octonic_2phi1")),
            prod(
                inf(q),
                inf(xq, step=2),
                inv_inf(q4, step=8),
                inv_inf(m(-1, q=2, x=1), step=4),
                Sum(
                    hypergeometric_spec(
                        half_pair(m(-1, x=1)) + half_pair(mx_q),
                        [mx_q] + half_pair(xq),
                        q,
                        label="octonic_4phi3",
                    )
                ),
            ),
            multiplier=prod(inf(q4, step=8), inf(m(-1, q=2, x=1), step=4)),
            paper_eq="§3 octonic transformation",
            default_order=S,
            provenance=Provenance(CLEARED, "both sides multiplied by (q^4;q^8)_inf (-xq^2;q^4)_inf"),
        ),
    ]


def _lemma_entries() -> List[Identity]:
    xy = m(1, x=1, y=1)
    xy_q = m(1, q=-1, x=1, y=1)
    xy_q2 = m(1, q=-2, x=1, y=1)
    split_range = SumRange(0, 10)
    diff_range = SumRange(2, 10)
    return [
        Identity(
            "lemma-poch-split",
            "(x)_2n as paired base q^2 products",
            "Pochhammer splitting lemma, n <= 10",
            Sum(SumSpec(split_range, power_mono=u, factors=(num(x, Affine(2, 0)),), label="split_lhs")),
            Sum(
                SumSpec(
                    split_range,
                    power_mono=u,
                    factors=(num(PairSqrt(x)), num(PairSqrt(x.times_q(1)))),
                    label="split_rhs",
                )
            ),
            paper_eq="§2 (x)_2n splitting, after Eq. (8)",
            default_order=190,
            normalize=False,
            tags=("family",),
        ),
        Identity(
            "lemma-diff-poch",
            "Difference of Pochhammer ratios",
            "Pochhammer difference lemma, 2 <= n <= 10",
            Add(
                (
                    Sum(SumSpec(diff_range, power_mono=u, factors=(num(xy_q2, Affine(2, 0)), den(xy_q2)), label="diff_a")),
                    Neg(Sum(SumSpec(diff_range, power_mono=u, factors=(num(xy_q, Affine(2, 0)), den(xy)), label="diff_b"))),
                )
            ),
            prod(
                MonomialTerm(xy_q),
                Sum(
                    SumSpec(
                        diff_range,
                        power_mono=u,
                        factors=(
                            num(xy, Affine(1, -2), shift=Affine(1, 0)),
                            num(ONE, Affine(0, 1), shift=Affine(1, 0)),
                            num(ONE, Affine(0, 1), shift=Affine(1, -1)),
                        ),
                        label="diff_rhs",
                    )
                ),
            ),
            paper_eq="§2 Pochhammer difference lemma, before Eq. (18)",
            default_order=140,
            tags=("family",),
        ),
    ]


def _heine(order: int) -> Identity:
    qx = m(1, q=1, x=1)
    return Identity(
        "heine1-spec",
        "Heine's first transformation at a=q^2, b=q^3, c=q^5, z=qx",
        "Heine's first transformation",
        Sum(hypergeometric_spec([m(1, q=2), m(1, q=3)], [m(1, q=5)], qx, label="heine_lhs")),
        prod(
            inf(m(1, q=3), m(1, q=3, x=1)),
            inv_inf(m(1, q=5), qx),
            Sum(hypergeometric_spec([m(1, q=2), qx], [m(1, q=3, x=1)], m(1, q=3), label="heine_rhs")),
        ),
        paper_eq="Eq. (4)",
        default_order=order,
        provenance=Provenance(
            SPECIALIZATION,
            "monomial specialization",
            (("a", "q^2"), ("b", "q^3"), ("c", "q^5"), ("z", "q*x")),
        ),
    )


def _gasper_rahman(order: int) -> Identity:
    qx = m(1, q=1, x=1)
    q3 = m(1, q=3)
    lhs = prod(
        Sum(hypergeometric_spec([q3, q], [m(1, q=2)], qx, label="gr_left_a")),
        Sum(hypergeometric_spec([q3, m(1, q=2)], [q3], qx, label="gr_left_b")),
    )
    first_sum = Sum(
        hypergeometric_spec(
            [q3, q] + half_pair(m(1, q=4)) + half_pair(m(1, q=5)),
            [q3, m(1, q=2), m(1, q=4), m(1, q=4, x=1), m(1, q=1, x=-1)],
            q,
            label="gr_first",
        )
    )
    second_sum = Sum(
        hypergeometric_spec(
            [qx, m(1, q=3, x=1)] + half_pair(m(1, q=4, x=2)) + half_pair(m(1, q=5, x=2)),
            [m(1, q=4, x=1), m(1, q=2, x=1), m(1, q=3, x=1), qx, m(1, q=4, x=2)],
            q,
            label="gr_second",
        )
    )
    upper_products = inf(q3, q, m(1, q=4, x=1), m(1, q=2, x=1), m(1, q=3, x=1))
    stated_rhs = Add(
        (
            prod(inf(m(1, q=4, x=1), m(1, q=3, x=1)), inv_inf(qx, x), first_sum),
            prod(upper_products, inv_inf(m(1, q=2), q3, qx, qx, m(1, x=-1)), second_sum),
        )
    )
    cleared_rhs = Add(
        (
            prod(inf(m(1, q=4, x=1), m(1, q=3, x=1)), inv_inf(qx), first_sum),
            prod(MonomialTerm(m(-1, x=1)), upper_products, inv_inf(m(1, q=2), q3, qx, m(1, q=1, x=-1)), second_sum),
        )
    )
    return Identity(
        "gr-product-spec",
        "Product formula at a=q^3, b=q, c=q^2, z=qx",
        "Gasper-Rahman product formula",
        lhs,
        stated_rhs,
        multiplier=prod(inf(x)),
        cleared_rhs=cleared_rhs,
        paper_eq="Eq. (7)",
        default_order=order,
        provenance=Provenance(
            SPECIALIZATION,
            "both sides multiplied by (x;q)_inf using (x)_inf/(1/x)_inf = -x (qx)_inf/(q/x)_inf",
            (("a", "q^3"), ("b", "q"), ("c", "q^2"), ("z", "q*x")),
        ),
    )


def _sears_carlitz(order: int) -> Identity:
    qx = m(1, q=1, x=1)
    q2 = m(1, q=2)
    q2x = m(1, q=2, x=1)
    lhs = Sum(hypergeometric_spec([q2, q, q], [q2, q2], qx, label="sc_left"))
    first_sum = Sum(
        hypergeometric_spec(
            half_pair(q2) + half_pair(m(1, q=3)) + [q],
            [q2, q2, q2x, m(1, q=1, x=-1)],
            q,
            label="sc_nt_first",
        )
    )
    second_sum = Sum(
        hypergeometric_spec(
            half_pair(m(1, q=2, x=2)) + half_pair(m(1, q=3, x=2)) + [qx],
            [q2x, q2x, qx, m(1, q=2, x=2)],
            q,
            label="sc_nt_second",
        )
    )
    stated_rhs = Add(
        (
            prod(inf(q2x), inv_inf(x), first_sum),
            prod(inf(q2, q, q2x, q2x), inv_inf(q2, q2, qx, m(1, x=-1)), second_sum),
        )
    )
    cleared_rhs = Add(
        (
            prod(inf(q2x), first_sum),
            prod(MonomialTerm(m(-1, x=1)), inf(q, q2x, q2x), inv_inf(q2, m(1, q=1, x=-1)), second_sum),
        )
    )
    return Identity(
        "sears-carlitz-nt-spec",
        "Nonterminating Sears-Carlitz transformation at a=q^2, b=c=q",
        "nonterminating Sears-Carlitz transformation",
        lhs,
        stated_rhs,
        multiplier=prod(inf(x)),
        cleared_rhs=cleared_rhs,
        paper_eq="Eq. (13)",
        default_order=order,
        provenance=Provenance(
            SPECIALIZATION,
            "both sides multiplied by (x;q)_inf using (x)_inf/(1/x)_inf = -x (qx)_inf/(q/x)_inf",
            (("a", "q^2"), ("b", "q"), ("c", "q")),
        ),
    )


def _jane(order: int) -> Identity:
    mx_q = m(-1, q=-1, x=1)
    x2_q = m(1, q=-1, x=2)
    lhs = Sum(hypergeometric_spec([mx_q] + half_pair(x2_q), [x2_q, x], q, label="jane_3phi2"))
    rhs = prod(
        inf(m(-1, q=1)),
        inv_inf(x),
        Sum(hypergeometric_spec([mx_q, m(-1, x=1)], [m(1, x=2)], m(1, q=2), step=2, label="jane_2phi1")),
    )
    return Identity(
        "jane-spec",
        "Jane's quadratic formula at a=-x/q, b=x/sqrt(q), z=-q",
        "Jane's quadratic transformation",
        lhs,
        rhs,
        multiplier=prod(inf(x, x, m(1, x=2))),
        paper_eq="Eq. (11), Jane's quadratic formula",
        default_order=order,
        provenance=Provenance(
            SPECIALIZATION,
            "both sides multiplied by (x;q)_inf^2 (x^2;q)_inf",
            (("a", "-x/q"), ("b", "x/sqrt(q)"), ("z", "-q")),
        ),
    )


def _entries() -> List[Identity]:
    D = config.DEFAULT_ORDER
    S = config.SPECIALIZED_ORDER
    return (
        _theta_entries(D)
        + _difference_entries(D)
        + _corollary_entries(D, S)
        + _lemma_entries()
        + [_heine(S), _gasper_rahman(S), _sears_carlitz(S), _jane(S)]
    )


@lru_cache(maxsize=1)
def builtin_catalog() -> Dict[str, Identity]:
    return {ident.id: ident for ident in _entries()}


__all__ = [
    "Identity",
    "Provenance",
    "STATED",
    "CLEARED",
    "SPECIALIZATION",
    "SIDES",
    "builtin_catalog",
    "theta_partial_sum",
    "theta_tail_sum",
    "L_sum",
    "G_expr",
    "F_expr",
    "warnaar_lhs",
    "warnaar_rhs",
    "heine_form",
]
