import json
from dataclasses import replace
from pathlib import Path

import pytest

from app.qtheta.blocks import mono
from app.qtheta.catalog import SIDES, SPECIALIZATION, builtin_catalog
from app.qtheta.error_codes import ErrorCode
from app.qtheta.errors import DefinitionError, UnknownIdentity, UsageError
from app.qtheta.expr import Inv, PochInf
from app.qtheta.expr_json import encode_expr
from app.qtheta.laurent import parse_laurent
from app.qtheta.registry import (
    check_identity,
    evaluate_side,
    get_identity,
    list_identities,
    load_catalog,
    parse_binding,
    resolve_ids,
    substitute_identity,
)
from app.qtheta.reports import STATUS_ERROR, STATUS_PASS
from app.qtheta.series import qs_coeff, qs_diff_report, qs_scale, qs_sub

CATALOG = builtin_catalog()
DERIVATION_ORDER = 30


@pytest.fixture(autouse=True)
def _no_order_override(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("QTHETA_ORDER", raising=False)


def test_unknown_identity() -> None:
    with pytest.raises(UnknownIdentity) as excinfo:
        get_identity("no-such-identity")
    assert excinfo.value.error_code == ErrorCode.UNKNOWN_IDENTITY


def test_resolve_ids_keeps_order_and_expands_all() -> None:
    assert resolve_ids("jtp,gauss-sum") == ["jtp", "gauss-sum"]
    assert resolve_ids(["gauss-sum", "jtp, gauss-sum"]) == ["gauss-sum", "jtp"]
    assert resolve_ids("all") == list(CATALOG)
    assert resolve_ids(None) == list(CATALOG)
    with pytest.raises(UnknownIdentity):
        resolve_ids("jtp,bogus")


def test_list_identities_filters_by_title_or_id() -> None:
    rows = list_identities(filter_text="TRIPLE")

    assert [row["id"] for row in rows] == ["jtp"]
    assert set(rows[0]) == {"id", "title", "paper_eq", "reference", "default_order", "provenance"}
    assert rows[0]["paper_eq"] == "Eq. (1)"
    assert len(list_identities()) == len(CATALOG)


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("q/x", mono(q=1, x=-1)),
        ("-x*q^2", mono(-1, q=2, x=1)),
        ("1/2*y", mono("1/2", y=1)),
        ("x/q^-1", mono(q=1, x=1)),
        ("-1", mono(-1)),
    ],
)
def test_parse_binding(text: str, expected) -> None:
    assert parse_binding(text) == expected


@pytest.mark.parametrize("text", ["", "x*", "w", "0*x", "x**y"])
def test_parse_binding_rejects_garbage(text: str) -> None:
    with pytest.raises(UsageError):
        parse_binding(text)


def test_order_comes_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("QTHETA_ORDER", "5")

    assert check_identity("jtp").order == 5
    assert check_identity("jtp", 4).order == 4


def test_order_must_be_positive() -> None:
    with pytest.raises(UsageError):
        check_identity("jtp", 0)


def test_check_records_sum_indices() -> None:
    report = check_identity("jtp", 10)

    assert report.status == STATUS_PASS
    # n(n-1)/2 <= 10 reaches n = 5 and n = -4
    assert report.n_max_used["theta_complete"] == 5


def test_non_evaluable_side_becomes_an_error_report() -> None:
    ident = CATALOG["jtp"]
    broken = replace(ident, stated_rhs=Inv(PochInf(mono(x=1))))

    report = check_identity(broken, 4)

    assert report.status == STATUS_ERROR
    assert report.error is not None
    assert report.error.error_code == ErrorCode.NOT_A_UNIT
    assert report.error.path.startswith("rhs")


def test_sum_formula_at_y_equal_q_over_x_is_the_triple_product() -> None:
    derived = substitute_identity("warnaar-sum", {"y": "q/x"})

    assert derived.provenance.kind == SPECIALIZATION
    assert derived.provenance.bindings == (("y", "q*x^-1"),)
    assert check_identity(derived, DERIVATION_ORDER).status == STATUS_PASS
    lhs = evaluate_side(derived, "lhs", DERIVATION_ORDER)
    assert qs_diff_report(lhs, evaluate_side(CATALOG["jtp"], "lhs", DERIVATION_ORDER)) is None


def test_sum_formula_at_y_equal_x_over_q_is_the_shifted_partial_theta_identity() -> None:
    derived = substitute_identity("warnaar-sum", {"y": "x/q"})
    target = CATALOG["ptheta-shift"]

    assert check_identity(derived, DERIVATION_ORDER).status == STATUS_PASS
    # the substituted sides carry an extra factor (1 - x/q)
    for side in SIDES:
        series = evaluate_side(target, side, DERIVATION_ORDER + 1)
        shifted = qs_sub(series, qs_scale(series, parse_laurent("x"), -1))
        assert qs_diff_report(evaluate_side(derived, side, DERIVATION_ORDER), shifted) is None


def test_difference_theorem_at_y_equal_minus_x() -> None:
    derived = substitute_identity("main-difference", {"y": "-x"}, new_id="difference-minus-x")

    assert derived.id == "difference-minus-x"
    assert check_identity(derived, DERIVATION_ORDER).status == STATUS_PASS


def test_q_power_substitution_of_a_partial_theta_identity() -> None:
    derived = substitute_identity("ptheta-quadratic", {"x": "-x*q^2"}, q_power=4)

    series = evaluate_side(derived, "lhs", DERIVATION_ORDER)
    # sum_n q^(2n^2) x^n
    expected = {0: 1, 2: parse_laurent("x"), 8: parse_laurent("x^2"), 18: parse_laurent("x^3")}
    for e in range(DERIVATION_ORDER + 1):
        assert qs_coeff(series, e) == expected.get(e, 0)
    assert check_identity(derived, DERIVATION_ORDER).status == STATUS_PASS


def test_load_catalog_reads_definitions(tmp_path: Path) -> None:
    path = tmp_path / "defs.json"
    euler = PochInf(mono(q=1))
    payload = {
        "schema": 1,
        "identities": [
            {
                "id": "euler-inverse",
                "title": "Euler product times its inverse",
                "paper_eq": "Euler product inverse",
                "lhs": encode_expr(euler * Inv(euler)),
                "rhs": {"node": "const", "poly": "1"},
                "default_order": 6,
            }
        ],
    }
    path.write_text(json.dumps(payload), encoding="utf-8")

    catalog = load_catalog(path)

    assert len(catalog) == len(CATALOG) + 1
    ident = catalog["euler-inverse"]
    assert ident.tags == ("user",)
    assert ident.paper_eq == "Euler product inverse"
    assert check_identity(ident).status == STATUS_PASS


def test_load_catalog_rejects_duplicate_ids(tmp_path: Path) -> None:
    path = tmp_path / "defs.json"
    payload = {
        "schema": 1,
        "identities": [{"id": "jtp", "lhs": {"node": "const", "poly": "1"}, "rhs": {"node": "const", "poly": "1"}}],
    }
    path.write_text(json.dumps(payload), encoding="utf-8")

    with pytest.raises(DefinitionError) as excinfo:
        load_catalog(path)
    assert excinfo.value.path == "identities[0]"
