"""Seeded randomized checks of the series algebra."""

import random
from fractions import Fraction

from app.qtheta.blocks import Mono, Monomial, PairSqrt, mono, poch_finite, poch_infinite, theta_complete, theta_partial
from app.qtheta.laurent import LaurentPoly, format_poly, parse_laurent
from app.qtheta.series import QSeries, qs_diff_report, qs_invert, qs_subst_q_power, qs_subst_var, qs_truncate

SEED = 20261019
CASES = 1000
POCH_CASES = 300
ORDER = 5
POCH_ORDER = 8


def _coef(rng: random.Random) -> Fraction:
    value = Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2, 3)))
    return value or Fraction(1)


def _poly(rng: random.Random, terms: int = 3) -> LaurentPoly:
    mapping = {}
    for _ in range(terms):
        mapping[(rng.randint(-2, 2), rng.randint(-1, 2))] = _coef(rng)
    return LaurentPoly.from_exponents(mapping)


def _series(rng: random.Random, order: int = ORDER, *, unit: bool = False) -> QSeries:
    coeffs = {e: _poly(rng, 2) for e in range(order + 1) if rng.random() < 0.7}
    if unit:
        coeffs[0] = LaurentPoly.from_exponents({(rng.randint(-2, 2), rng.randint(-1, 1)): _coef(rng)})
    coeffs.setdefault(0, LaurentPoly.one())
    return QSeries(coeffs, order)


def _monomial(rng: random.Random) -> Monomial:
    return mono(_coef(rng), q=rng.randint(0, 2), x=rng.randint(-2, 2), y=rng.randint(-1, 1))


def test_laurent_ring_axioms() -> None:
    rng = random.Random(SEED)
    for _ in range(CASES):
        a, b, c = _poly(rng), _poly(rng), _poly(rng)

        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert (a + b) * c == a * c + b * c
        assert a - a == LaurentPoly.zero()


def test_truncation_commutes_with_products() -> None:
    rng = random.Random(SEED + 1)
    for _ in range(CASES):
        a, b = _series(rng), _series(rng)
        cut = rng.randint(0, ORDER)

        assert qs_truncate(a * b, cut) == qs_truncate(a, cut) * qs_truncate(b, cut)
        assert qs_truncate(a + b, cut) == qs_truncate(a, cut) + qs_truncate(b, cut)


def test_inverse_round_trip() -> None:
    rng = random.Random(SEED + 2)
    for _ in range(CASES):
        a = _series(rng, unit=True)

        assert a * qs_invert(a, ORDER) == QSeries.one(ORDER)


def test_substitutions_are_ring_homomorphisms() -> None:
    rng = random.Random(SEED + 3)
    for _ in range(CASES):
        a, b = _series(rng), _series(rng)
        target = mono(_coef(rng), y=rng.choice((-1, 1)), u=1)
        k = rng.randint(2, 3)

        assert qs_subst_var(a * b, "x", target) == qs_subst_var(a, "x", target) * qs_subst_var(b, "x", target)
        assert qs_subst_q_power(a * b, k) == qs_subst_q_power(a, k) * qs_subst_q_power(b, k)


def test_q_carrying_substitutions_agree_on_the_sound_range() -> None:
    rng = random.Random(SEED + 4)
    for _ in range(CASES):
        a, b = _series(rng), _series(rng)
        alpha = rng.choice((-1, 1))
        target = mono(_coef(rng), q=alpha, y=rng.choice((-1, 1)), u=1)

        whole = qs_subst_var(a * b, "x", target, degree_range=(-4, 4))
        parts = qs_subst_var(a, "x", target, degree_range=(-2, 2)) * qs_subst_var(b, "x", target, degree_range=(-2, 2))

        assert whole.order == ORDER - 4
        assert qs_diff_report(whole, parts) is None


def test_complete_theta_splits_into_reflected_partial_thetas() -> None:
    # theta(x) = P(x) + P(q/x) - 1
    for order in (4, 9, 16):
        partial = theta_partial(mono(x=1), order)
        reflected = qs_subst_var(partial, "x", mono(q=1, x=-1), degree_range=(0, None))
        rebuilt = partial + reflected - QSeries.one(order)

        assert reflected == theta_partial(mono(q=1, x=-1), order)
        assert qs_diff_report(rebuilt, theta_complete(mono(x=1), order)) is None


def test_paired_roots_multiply_out() -> None:
    # (s;q)_n (-s;q)_n = (s^2;q^2)_n
    rng = random.Random(SEED + 5)
    for _ in range(POCH_CASES):
        s = _monomial(rng)
        n = rng.randint(0, 4)
        halves = poch_finite(Mono(s), n, 1, POCH_ORDER) * poch_finite(Mono(s.scaled(-1)), n, 1, POCH_ORDER)

        assert qs_diff_report(poch_finite(PairSqrt(s * s), n, 1, POCH_ORDER), halves) is None
        assert poch_finite(PairSqrt(s * s), n, 1, POCH_ORDER) == poch_finite(Mono(s * s), n, 2, POCH_ORDER)


def test_even_length_products_split_by_parity() -> None:
    # (m)_2n = (m;q^2)_n (mq;q^2)_n
    rng = random.Random(SEED + 6)
    for _ in range(POCH_CASES):
        m = _monomial(rng)
        n = rng.randint(0, 4)
        split = poch_finite(Mono(m), n, 2, POCH_ORDER) * poch_finite(Mono(m.times_q(1)), n, 2, POCH_ORDER)

        assert qs_diff_report(poch_finite(Mono(m), 2 * n, 1, POCH_ORDER), split) is None


def test_infinite_products_fold_at_any_length() -> None:
    # (m)_inf = (m)_L (mq^L)_inf
    rng = random.Random(SEED + 7)
    for _ in range(POCH_CASES):
        m = _monomial(rng)
        length = rng.randint(0, 5)
        folded = poch_finite(Mono(m), length, 1, POCH_ORDER) * poch_infinite(m.times_q(length), 1, POCH_ORDER)

        assert qs_diff_report(poch_infinite(m, 1, POCH_ORDER), folded) is None


def test_printed_polynomials_parse_back() -> None:
    rng = random.Random(SEED + 8)
    for _ in range(CASES):
        mapping = {
            tuple(rng.randint(-3, 3) for _ in range(4)): _coef(rng) for _ in range(rng.randint(1, 5))
        }
        p = LaurentPoly.from_exponents(mapping)

        assert parse_laurent(format_poly(p)) == p
