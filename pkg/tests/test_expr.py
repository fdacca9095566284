from app.qtheta.blocks import ALL_INTEGERS, BINOM_N_2, NON_NEGATIVE, SumSpec, mono
from app.qtheta.error_codes import ErrorCode
from app.qtheta.expr import (
    Add,
    Inv,
    MonomialTerm,
    Mul,
    Neg,
    PochInf,
    Sum,
    const,
    eval_expr,
    lower_bound,
    products,
    validate_evaluable,
)
from app.qtheta.laurent import parse_laurent
from app.qtheta.series import qs_coeff


def _coeffs(series, stop: int) -> list:
    return [qs_coeff(series, e) for e in range(series.lo, stop + 1)]


def test_operators_build_nodes() -> None:
    a, b = products(mono(q=1), mono(x=1))

    assert a * b == Mul((a, b))
    assert a - b == Add((a, Neg(b)))
    assert a.step == 1


def test_product_times_its_inverse_is_one() -> None:
    euler = PochInf(mono(q=1))

    series = eval_expr(Mul((euler, Inv(euler))), 6)

    assert series.order == 6
    assert _coeffs(series, 6) == [1, 0, 0, 0, 0, 0, 0]


def test_inverse_of_a_sum_node() -> None:
    one_minus_q = Add((const(1), MonomialTerm(mono(-1, q=1))))

    series = eval_expr(Inv(one_minus_q), 5)

    assert _coeffs(series, 5) == [1, 1, 1, 1, 1, 1]


def test_negative_valuation_is_kept() -> None:
    node = Add((MonomialTerm(mono(q=-2, x=1)), const(1)))

    series = eval_expr(node, 2)

    assert series.lo == -2
    assert qs_coeff(series, -2) == parse_laurent("x")
    assert qs_coeff(series, 0) == 1
    assert lower_bound(node) == -2


def test_negation() -> None:
    series = eval_expr(Neg(PochInf(mono(q=1))), 2)

    assert _coeffs(series, 2) == [-1, 1, 1]


def test_non_unit_inverse_reports_path() -> None:
    validation = validate_evaluable(Inv(const(parse_laurent("1 - x"))))

    assert validation.ok is False
    assert validation.path == "/inv"
    assert validation.error_code == ErrorCode.NOT_A_UNIT


def test_nested_path_names_the_factor() -> None:
    node = Mul((const(2), Inv(PochInf(mono(x=1)))))

    validation = validate_evaluable(node, "lhs")

    assert validation.ok is False
    assert validation.path == "lhs/mul[1]/inv"
    assert validation.error_code == ErrorCode.NOT_A_UNIT


def test_divergent_sum_is_not_evaluable() -> None:
    validation = validate_evaluable(Sum(SumSpec(ALL_INTEGERS, power_mono=mono(x=1))))

    assert validation.ok is False
    assert validation.path == "/sum"
    assert validation.error_code == ErrorCode.DIVERGENT_BOUND


def test_valid_sum_carries_a_certificate() -> None:
    spec = SumSpec(ALL_INTEGERS, True, BINOM_N_2, mono(x=1), label="theta")

    validation = validate_evaluable(Sum(spec))

    assert validation.ok
    assert list(validation.certificates) == ["/sum"]


def test_window_mode_inverts_variable_factors() -> None:
    series = eval_expr(Inv(PochInf(mono(x=1))), 2, window=3)

    assert qs_coeff(series, 0) == parse_laurent("1 + x + x^2 + x^3")


def test_stats_record_largest_index() -> None:
    spec = SumSpec(NON_NEGATIVE, True, BINOM_N_2, mono(q=1), label="partial")
    stats: dict = {}

    eval_expr(Sum(spec), 10, stats=stats)

    # n(n+1)/2 <= 10 for n <= 4
    assert stats == {"partial": 4}
