import json
from pathlib import Path

import pytest

from app.qtheta import expr_json
from app.qtheta.blocks import PairSqrt, mono
from app.qtheta.catalog import builtin_catalog
from app.qtheta.errors import DefinitionError
from app.qtheta.expr import PochFin
from app.qtheta.expr_json import (
    decode_expr,
    decode_monomial,
    encode_expr,
    encode_monomial,
    load_definitions,
    parse_expr,
    validate_definitions_payload,
)


def test_monomial_encoding_skips_zero_exponents() -> None:
    assert encode_monomial(mono("-1/2", q=3, y=-1)) == {"coef": "-1/2", "q": 3, "y": -1}
    assert decode_monomial({"coef": "-1/2", "q": 3, "y": -1}) == mono("-1/2", q=3, y=-1)
    assert decode_monomial({}) == mono()


def test_catalog_expressions_survive_encoding() -> None:
    for ident in builtin_catalog().values():
        for node in (ident.stated_lhs, ident.stated_rhs):
            assert decode_expr(encode_expr(node)) == node


def test_paired_parameters_are_encoded() -> None:
    node = PochFin(PairSqrt(mono(x=2)), 3, 1)

    payload = encode_expr(node)

    assert payload["param"] == {"kind": "pair", "m": {"coef": "1", "x": 2}}
    assert decode_expr(payload) == node


def test_decode_errors_carry_a_path() -> None:
    payload = {"node": "mul", "factors": [{"node": "const", "poly": "1"}, {"node": "poch_inf", "m": {"w": 1}}]}

    with pytest.raises(DefinitionError) as excinfo:
        decode_expr(payload, "lhs")

    assert excinfo.value.path == "lhs/mul[1]/m"


@pytest.mark.parametrize(
    "payload",
    [
        [],
        {"node": "bogus"},
        {"node": "add"},
        {"node": "const", "poly": "q"},
        {"node": "poch_fin", "param": {"kind": "mono", "m": {}}, "length": -1},
        {"node": "poch_fin", "param": {"kind": "sqrt", "m": {}, "sign": 2}, "length": 1},
    ],
)
def test_bad_nodes_are_definition_errors(payload) -> None:
    with pytest.raises(DefinitionError):
        decode_expr(payload)


def test_parse_expr_rejects_invalid_json() -> None:
    with pytest.raises(DefinitionError):
        parse_expr("{not json")
    assert parse_expr('{"node": "monomial", "m": {"q": 2}}') == decode_expr({"node": "monomial", "m": {"q": 2}})


def test_schema_rejects_unknown_identity_fields() -> None:
    payload = {
        "schema": 1,
        "identities": [
            {"id": "a", "lhs": {"node": "const", "poly": "1"}, "rhs": {"node": "const", "poly": "1"}, "source_page": "x"}
        ],
    }

    with pytest.raises(DefinitionError) as excinfo:
        validate_definitions_payload(payload)
    assert excinfo.value.path == "/identities/0"


def test_schema_rejects_dotted_ids() -> None:
    payload = {
        "schema": 1,
        "identities": [{"id": "a.lhs", "lhs": {"node": "const", "poly": "1"}, "rhs": {"node": "const", "poly": "1"}}],
    }

    with pytest.raises(DefinitionError):
        validate_definitions_payload(payload)


def test_schema_types_the_equation_citation() -> None:
    record = {"id": "a", "lhs": {"node": "const", "poly": "1"}, "rhs": {"node": "const", "poly": "1"}}

    validate_definitions_payload({"schema": 1, "identities": [{**record, "paper_eq": "Eq. (1)"}]})
    with pytest.raises(DefinitionError) as excinfo:
        validate_definitions_payload({"schema": 1, "identities": [{**record, "paper_eq": 1}]})
    assert excinfo.value.path == "/identities/0/paper_eq"


def test_load_definitions_logs_and_returns_records(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    events: list = []
    monkeypatch.setattr(expr_json, "_qtheta_event", lambda *a, **k: events.append(k))
    node = PochFin(PairSqrt(mono(q=1, x=2)), 2, 1)
    path = tmp_path / "defs.json"
    path.write_text(
        json.dumps(
            {
                "schema": 1,
                "identities": [{"id": "pair", "lhs": encode_expr(node), "rhs": encode_expr(node), "normalize": False}],
            }
        ),
        encoding="utf-8",
    )

    records = load_definitions(path)

    assert [r["id"] for r in records] == ["pair"]
    assert events[-1]["count"] == 1


def test_missing_definitions_file(tmp_path: Path) -> None:
    with pytest.raises(DefinitionError):
        load_definitions(tmp_path / "missing.json")
