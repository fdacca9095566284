from fractions import Fraction

import pytest

from app.qtheta.errors import ArityError, NotAUnit, UsageError
from app.qtheta.laurent import (
    LaurentPoly,
    format_poly,
    lp_invert_unit,
    pack,
    parse_laurent,
    to_scalar,
    unpack,
)


def test_pack_round_trips_negative_exponents() -> None:
    for exps in [(0, 0, 0, 0), (1, -1, 0, 0), (-7, 3, -2, 5), (100, -100, 1, -1)]:
        assert unpack(pack(exps)) == exps


def test_packed_keys_add_like_vectors() -> None:
    a = (3, -2, 0, 1)
    b = (-5, 2, 4, -1)
    assert unpack(pack(a) + pack(b)) == (-2, 0, 4, 0)


def test_arithmetic_basics() -> None:
    x = LaurentPoly.var("x")
    y = LaurentPoly.var("y")

    assert (x + 1) * (x - 1) == x * x - 1
    assert (x + y) ** 2 == parse_laurent("x^2 + 2*x*y + y^2")
    assert x - x == 0
    assert (x * 0).is_zero()
    assert 1 - x == parse_laurent("1 - x")


def test_monomial_inverse() -> None:
    p = parse_laurent("2*x*y^-3")

    assert lp_invert_unit(p) == parse_laurent("1/2*x^-1*y^3")
    assert p ** -2 == LaurentPoly.from_exponents({(-2, 6): Fraction(1, 4)})


def test_inverting_a_binomial_fails() -> None:
    with pytest.raises(NotAUnit):
        lp_invert_unit(parse_laurent("1 - x"))


def test_format_orders_by_total_degree() -> None:
    p = LaurentPoly.from_exponents({(2,): 1, (-1,): -1, (0, 1): 3})

    assert format_poly(p) == "-x^-1 + 3*y + x^2"
    assert format_poly(LaurentPoly.zero()) == "0"


def test_parse_accepts_fractions_and_negative_exponents() -> None:
    p = parse_laurent("-1/3*x^-2*y + 5 - u^(-1)")

    assert p.as_dict() == {
        (-2, 1, 0, 0): Fraction(-1, 3),
        (0, 0, 0, 0): 5,
        (0, 0, -1, 0): -1,
    }


def test_parse_then_format_is_stable() -> None:
    text = "-x^-1 + 1/2 + x*y - 4*u*v^2"
    assert format_poly(parse_laurent(text)) == text


def test_parse_collects_like_terms() -> None:
    assert parse_laurent("x + x - 2*x") == 0
    assert parse_laurent("x*x*y^-1") == parse_laurent("x^2*y^-1")


@pytest.mark.parametrize("text", ["", "q + 1", "x +", "z^2", "1/0*x"])
def test_parse_rejects_bad_text(text: str) -> None:
    with pytest.raises(UsageError):
        parse_laurent(text)


def test_arity_is_enforced() -> None:
    with pytest.raises(ArityError):
        LaurentPoly.var("y", arity=1)
    with pytest.raises(ArityError):
        parse_laurent("x*y", arity=1)
    with pytest.raises(ArityError):
        _ = LaurentPoly.var("x", arity=1) + LaurentPoly.var("x", arity=2)


def test_degree_range_and_constants() -> None:
    p = parse_laurent("x^-2*y + x^3 + 7")

    assert p.degree_range("x") == (-2, 3)
    assert p.degree_range("y") == (0, 1)
    assert LaurentPoly.zero().degree_range("x") is None
    assert p.constant_term() == 7
    assert LaurentPoly.constant("3/6") == Fraction(1, 2)


def test_scalars_are_canonical() -> None:
    assert to_scalar(Fraction(4, 2)) == 2
    assert isinstance(to_scalar(Fraction(4, 2)), int)
    assert to_scalar(" 3/9 ") == Fraction(1, 3)
    with pytest.raises(UsageError):
        to_scalar(True)
    with pytest.raises(UsageError):
        to_scalar(0.5)
