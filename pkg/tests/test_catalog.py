from dataclasses import replace

import pytest

from app.qtheta.catalog import SPECIALIZATION, STATED, builtin_catalog
from app.qtheta.expr import eval_expr, validate_evaluable
from app.qtheta.laurent import parse_laurent
from app.qtheta.registry import check_identity
from app.qtheta.reports import STATUS_MISMATCH, STATUS_PASS
from app.qtheta.series import qs_coeff

CATALOG = builtin_catalog()
REDUCED_ORDER = 8


@pytest.fixture(autouse=True)
def _no_order_override(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("QTHETA_ORDER", raising=False)


def test_catalog_is_large_and_well_formed() -> None:
    assert len(CATALOG) >= 24
    for ident_id, ident in CATALOG.items():
        assert ident.id == ident_id
        assert ident.title
        assert ident.reference
        assert ident.paper_eq.startswith(("Eq. (", "§"))
        assert ident.default_order >= 1


@pytest.mark.parametrize("ident_id", sorted(CATALOG))
def test_normal_forms_validate(ident_id: str) -> None:
    ident = CATALOG[ident_id]

    for side in ("lhs", "rhs"):
        validation = validate_evaluable(ident.side(side), side)
        assert validation.ok, f"{ident_id}.{side}: {validation.message} at {validation.path}"


@pytest.mark.parametrize("ident_id", sorted(CATALOG))
def test_identity_holds_at_reduced_order(ident_id: str) -> None:
    report = check_identity(ident_id, REDUCED_ORDER)

    assert report.status == STATUS_PASS, report
    assert report.order == REDUCED_ORDER


def test_jacobi_cube_head() -> None:
    series = eval_expr(CATALOG["jacobi-cube"].lhs, 3)

    assert [qs_coeff(series, e) for e in range(4)] == [-1, 3, 0, -5]


def test_triple_product_head() -> None:
    series = eval_expr(CATALOG["jtp"].lhs, 1)

    assert qs_coeff(series, 0) == parse_laurent("1 - x")
    assert qs_coeff(series, 1) == parse_laurent("-x^-1 + x^2")


def test_gauss_sum_head() -> None:
    series = eval_expr(CATALOG["gauss-sum"].stated_lhs, 3)

    assert [qs_coeff(series, e) for e in range(4)] == [1, 1, 0, 1]


def test_warnaar_constant_term() -> None:
    series = eval_expr(CATALOG["warnaar-sum"].lhs, 2)

    assert qs_coeff(series, 0) == parse_laurent("1 - x - y")


def test_main_difference_head() -> None:
    series = eval_expr(CATALOG["main-difference"].lhs, 1)

    assert qs_coeff(series, 0) == -1
    assert qs_coeff(series, 1) == parse_laurent("x + y")


def test_product_forms_share_a_normal_form() -> None:
    assert CATALOG["aw-4phi3"].rhs == CATALOG["aw-product"].rhs


def test_stated_entries_have_no_bindings() -> None:
    for ident in CATALOG.values():
        assert ident.provenance.kind != SPECIALIZATION or ident.provenance.bindings
    assert CATALOG["jtp"].provenance.kind == STATED


def test_perturbed_weight_is_caught() -> None:
    ident = CATALOG["jacobi-cube"]
    spec = ident.stated_lhs.spec
    broken = replace(ident, stated_lhs=replace(ident.stated_lhs, spec=replace(spec, weight=(1, 2))))

    report = check_identity(broken, 6)

    assert report.status == STATUS_MISMATCH
    assert report.mismatch is not None
    assert report.mismatch.q_exp == 0
    assert report.mismatch.diff == -2


@pytest.mark.parametrize(
    ("ident_id", "paper_eq"),
    [
        ("jtp", "Eq. (1)"),
        ("warnaar-sum", "Eq. (3)"),
        ("main-difference", "Eq. (12)/(16)"),
        ("double-square", "Eq. (20)"),
        ("octonic", "§3 octonic transformation"),
    ],
)
def test_entries_cite_their_displayed_formula(ident_id: str, paper_eq: str) -> None:
    assert CATALOG[ident_id].paper_eq == paper_eq
