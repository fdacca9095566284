"""JSON encoding of expressions and user identity definition files.

Monomials are ``{"coef": "p/q", "q": int, "x": int, "y": int, "u": int, "v": int}``
(every key optional); nodes are objects tagged with ``"node"``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List

from . import config
from .blocks import (
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
    TailFactor,
)
from .errors import DefinitionError, QThetaError
from .expr import Add, Const, Expr, Inv, Mul, MonomialTerm, Neg, PochFin, PochInf, Sum
from .laurent import VARS, format_poly, parse_laurent, to_scalar
from .logging_utils import _qtheta_event

SCHEMA_FILE = config.SCHEMA_DIR / "identity_definitions.schema.json"

PARAM_KINDS = {"mono": Mono, "pair": PairSqrt, "sqrt": SqrtHalf}


# ---------------------------------------------------------------------------
# encoding


def encode_monomial(m: Monomial) -> Dict[str, Any]:
    out: Dict[str, Any] = {"coef": str(m.coef)}
    if m.q_exp:
        out["q"] = m.q_exp
    for name, e in zip(VARS, m.var_exps):
        if e:
            out[name] = e
    return out


def _encode_param(p: Param) -> Dict[str, Any]:
    if isinstance(p, SqrtHalf):
        return {"kind": "sqrt", "m": encode_monomial(p.m), "sign": p.sign}
    if isinstance(p, PairSqrt):
        return {"kind": "pair", "m": encode_monomial(p.m)}
    return {"kind": "mono", "m": encode_monomial(p.m)}


def _affine(a: Affine) -> List[int]:
    return [a.a, a.b]


def _encode_spec(spec: SumSpec) -> Dict[str, Any]:
    rng = spec.index_range
    return {
        "node": "sum",
        "range": [rng.start, rng.stop],
        "alternating": spec.alternating,
        "quad": [spec.q_quad.A, spec.q_quad.B, spec.q_quad.C],
        "power": encode_monomial(spec.power_mono),
        "weight": list(spec.weight),
        "factors": [
            {
                "param": _encode_param(f.param),
                "length": _affine(f.length),
                "step": f.step,
                "side": f.side,
                "shift": _affine(f.shift),
            }
            for f in spec.factors
        ],
        "tails": [{"base": encode_monomial(t.base), "shift": _affine(t.shift), "step": t.step} for t in spec.tails],
        "divided": None if spec.divided is None else [encode_monomial(m) for m in spec.divided],
        "label": spec.label,
    }


def encode_expr(node: Expr) -> Dict[str, Any]:
    if isinstance(node, Const):
        return {"node": "const", "poly": format_poly(node.poly)}
    if isinstance(node, MonomialTerm):
        return {"node": "monomial", "m": encode_monomial(node.mono)}
    if isinstance(node, Add):
        return {"node": "add", "terms": [encode_expr(t) for t in node.terms]}
    if isinstance(node, Mul):
        return {"node": "mul", "factors": [encode_expr(f) for f in node.factors]}
    if isinstance(node, Neg):
        return {"node": "neg", "inner": encode_expr(node.inner)}
    if isinstance(node, Inv):
        return {"node": "inv", "inner": encode_expr(node.inner)}
    if isinstance(node, PochInf):
        return {"node": "poch_inf", "m": encode_monomial(node.mono), "step": node.step}
    if isinstance(node, PochFin):
        return {"node": "poch_fin", "param": _encode_param(node.param), "length": node.length, "step": node.step}
    if isinstance(node, Sum):
        return _encode_spec(node.spec)
    raise DefinitionError(f"cannot encode {type(node).__name__}")


# ---------------------------------------------------------------------------
# decoding


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DefinitionError(f"expected an integer, got {value!r}", path=where)
    return value


def decode_monomial(payload: Any, where: str = "") -> Monomial:
    if not isinstance(payload, dict):
        raise DefinitionError(f"monomial must be an object, got {payload!r}", path=where)
    unknown = set(payload) - {"coef", "q", *VARS}
    if unknown:
        raise DefinitionError(f"unknown monomial keys {sorted(unknown)}", path=where)
    try:
        coef = to_scalar(payload.get("coef", 1))
        exps = tuple(_int(payload.get(name, 0), where) for name in VARS)
        return Monomial(coef, _int(payload.get("q", 0), where), exps)
    except DefinitionError:
        raise
    except (QThetaError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise DefinitionError(f"invalid monomial: {exc}", path=where) from exc


def _decode_param(payload: Any, where: str) -> Param:
    if not isinstance(payload, dict) or payload.get("kind") not in PARAM_KINDS:
        raise DefinitionError(f"parameter needs kind in {sorted(PARAM_KINDS)}", path=where)
    m = decode_monomial(payload.get("m"), f"{where}/m")
    if payload["kind"] == "sqrt":
        sign = _int(payload.get("sign", 1), where)
        if sign not in (1, -1):
            raise DefinitionError(f"sqrt sign must be +1 or -1, got {sign}", path=where)
        return SqrtHalf(m, sign)
    return PARAM_KINDS[payload["kind"]](m)


def _decode_affine(payload: Any, where: str) -> Affine:
    if isinstance(payload, int) and not isinstance(payload, bool):
        return Affine(0, payload)
    if not isinstance(payload, list) or len(payload) != 2:
        raise DefinitionError(f"expected [a, b] for a*n + b, got {payload!r}", path=where)
    return Affine(_int(payload[0], where), _int(payload[1], where))


def _opt_int(value: Any, where: str) -> int | None:
    return None if value is None else _int(value, where)


def _decode_spec(payload: Dict[str, Any], where: str) -> SumSpec:
    rng = payload.get("range", [0, None])
    if not isinstance(rng, list) or len(rng) != 2:
        raise DefinitionError("range must be [start, stop]", path=where)
    quad = payload.get("quad", [0, 0, 0])
    if not isinstance(quad, list) or len(quad) != 3:
        raise DefinitionError("quad must be [A, B, C]", path=where)
    factors = []
    for i, f in enumerate(payload.get("factors", [])):
        fw = f"{where}/factor[{i}]"
        if not isinstance(f, dict):
            raise DefinitionError("factor must be an object", path=fw)
        factors.append(
            PochFactor(
                _decode_param(f.get("param"), fw),
                _decode_affine(f.get("length", [1, 0]), fw),
                _int(f.get("step", 1), fw),
                f.get("side", "numerator"),
                _decode_affine(f.get("shift", [0, 0]), fw),
            )
        )
    tails = [
        TailFactor(
            decode_monomial(t.get("base"), f"{where}/tail[{i}]"),
            _decode_affine(t.get("shift", [0, 0]), f"{where}/tail[{i}]"),
            _int(t.get("step", 1), f"{where}/tail[{i}]"),
        )
        for i, t in enumerate(payload.get("tails", []))
    ]
    divided = payload.get("divided")
    if divided is not None:
        if not isinstance(divided, list) or len(divided) != 2:
            raise DefinitionError("divided must be a pair of monomials", path=where)
        divided = (decode_monomial(divided[0], f"{where}/divided"), decode_monomial(divided[1], f"{where}/divided"))
    weight = payload.get("weight", [1])
    return SumSpec(
        SumRange(_opt_int(rng[0], where), _opt_int(rng[1], where)),
        bool(payload.get("alternating", False)),
        QuadExp(*(_int(v, where) for v in quad)),
        decode_monomial(payload.get("power", {}), f"{where}/power"),
        tuple(_int(w, where) for w in weight),
        tuple(factors),
        tuple(tails),
        divided,
        label=str(payload.get("label", "")),
    )


def decode_expr(payload: Any, where: str = "") -> Expr:
    if not isinstance(payload, dict) or "node" not in payload:
        raise DefinitionError(f"expression must be an object with a 'node' tag, got {payload!r}", path=where or "/")
    tag = payload["node"]
    try:
        if tag == "const":
            return Const(parse_laurent(str(payload["poly"])))
        if tag == "monomial":
            return MonomialTerm(decode_monomial(payload["m"], f"{where}/m"))
        if tag == "add":
            return Add(tuple(decode_expr(t, f"{where}/add[{i}]") for i, t in enumerate(payload["terms"])))
        if tag == "mul":
            return Mul(tuple(decode_expr(f, f"{where}/mul[{i}]") for i, f in enumerate(payload["factors"])))
        if tag == "neg":
            return Neg(decode_expr(payload["inner"], f"{where}/neg"))
        if tag == "inv":
            return Inv(decode_expr(payload["inner"], f"{where}/inv"))
        if tag == "poch_inf":
            return PochInf(decode_monomial(payload["m"], f"{where}/m"), _int(payload.get("step", 1), where))
        if tag == "poch_fin":
            length = _int(payload["length"], where)
            if length < 0:
                raise DefinitionError(f"finite product length must be non-negative, got {length}", path=where)
            return PochFin(_decode_param(payload["param"], where), length, _int(payload.get("step", 1), where))
        if tag == "sum":
            return Sum(_decode_spec(payload, f"{where}/sum"))
    except DefinitionError:
        raise
    except KeyError as exc:
        raise DefinitionError(f"{tag} node is missing {exc}", path=where or "/") from exc
    except QThetaError as exc:
        raise DefinitionError(str(exc.args[0]) if exc.args else tag, path=where or "/") from exc
    raise DefinitionError(f"unknown node tag {tag!r}", path=where or "/")


def parse_expr(text: str) -> Expr:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DefinitionError(f"expression is not valid JSON: {exc}") from exc
    return decode_expr(payload)


# ---------------------------------------------------------------------------
# definition files


def load_schema() -> Dict[str, Any]:
    with open(SCHEMA_FILE, "r", encoding="utf-8") as handle:
        return json.load(handle)


def validate_definitions_payload(payload: Any) -> None:
    import jsonschema

    try:
        jsonschema.validate(instance=payload, schema=load_schema())
    except jsonschema.ValidationError as exc:
        where = "/" + "/".join(str(p) for p in exc.absolute_path)
        raise DefinitionError(f"definitions file does not match schema: {exc.message}", path=where) from exc


def load_definitions(path: str | Path) -> List[Dict[str, Any]]:
    """Read and schema-check a definitions file; return its identity records."""

    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise DefinitionError(f"cannot read definitions file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DefinitionError(f"definitions file {path} is not valid JSON: {exc}") from exc
    validate_definitions_payload(payload)
    records = payload["identities"]
    _qtheta_event("definitions", phase="load", path=str(path), count=len(records))
    return records


__all__ = [
    "encode_monomial",
    "encode_expr",
    "decode_monomial",
    "decode_expr",
    "parse_expr",
    "load_schema",
    "validate_definitions_payload",
    "load_definitions",
]
