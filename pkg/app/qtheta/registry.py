"""Identity lookup, checking and substitution."""
from __future__ import annotations

import re
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple

from . import config
from .blocks import Monomial
from .catalog import SIDES, SPECIALIZATION, Identity, Provenance, builtin_catalog
from .errors import DefinitionError, QThetaError, UnknownIdentity, UsageError
from .expr import Expr, eval_expr, validate_evaluable
from .expr_json import decode_expr, load_definitions
from .laurent import VARS, to_scalar
from .logging_utils import _qtheta_event, timed_event
from .reports import STATUS_ERROR, STATUS_MISMATCH, STATUS_PASS, Report, ReportError
from .rewrite import rescale_q, substitute
from .series import QSeries, qs_diff_report

Catalog = Dict[str, Identity]


def _identity_from_record(record: Mapping[str, object]) -> Identity:
    ident_id = str(record["id"])
    multiplier = record.get("multiplier")
    return Identity(
        ident_id,
        str(record.get("title", ident_id)),
        str(record.get("reference", "user definition")),
        decode_expr(record["lhs"], "lhs"),
        decode_expr(record["rhs"], "rhs"),
        multiplier=decode_expr(multiplier, "multiplier") if multiplier is not None else None,
        default_order=int(record.get("default_order", config.DEFAULT_ORDER)),
        provenance=Provenance(detail="user definition"),
        normalize=bool(record.get("normalize", True)),
        tags=("user",),
        paper_eq=str(record.get("paper_eq", "")),
    )


def load_catalog(definitions: str | Path | None = None) -> Catalog:
    """The built-in catalog, extended by a user definitions file if given."""

    catalog: Catalog = dict(builtin_catalog())
    if definitions is None:
        return catalog
    for i, record in enumerate(load_definitions(definitions)):
        try:
            ident = _identity_from_record(record)
        except QThetaError as exc:
            raise DefinitionError(str(exc.args[0]) if exc.args else "invalid identity", path=f"identities[{i}]/{exc.path or ''}") from exc
        if ident.id in catalog:
            raise DefinitionError(f"identity id {ident.id!r} is already defined", path=f"identities[{i}]")
        catalog[ident.id] = ident
    return catalog


def get_identity(ident_id: str, catalog: Catalog | None = None) -> Identity:
    catalog = catalog if catalog is not None else builtin_catalog()
    try:
        return catalog[ident_id]
    except KeyError:
        raise UnknownIdentity(f"unknown identity {ident_id!r}") from None


def resolve_ids(selection: str | Sequence[str] | None, catalog: Catalog | None = None) -> List[str]:
    """Expand ``all`` / comma lists into known ids, keeping input order."""

    catalog = catalog if catalog is not None else builtin_catalog()
    if selection is None:
        return list(catalog)
    items: List[str] = []
    for part in [selection] if isinstance(selection, str) else selection:
        items.extend(p.strip() for p in part.split(",") if p.strip())
    if not items or items == ["all"]:
        return list(catalog)
    out: List[str] = []
    for ident_id in items:
        if ident_id == "all":
            out.extend(i for i in catalog if i not in out)
            continue
        get_identity(ident_id, catalog)
        if ident_id not in out:
            out.append(ident_id)
    return out


def list_identities(catalog: Catalog | None = None, *, filter_text: str | None = None) -> List[Dict[str, object]]:
    catalog = catalog if catalog is not None else builtin_catalog()
    needle = (filter_text or "").lower()
    rows: List[Dict[str, object]] = []
    for ident in catalog.values():
        if needle and needle not in ident.title.lower() and needle not in ident.id.lower():
            continue
        rows.append(
            {
                "id": ident.id,
                "title": ident.title,
                "paper_eq": ident.paper_eq,
                "reference": ident.reference,
                "default_order": ident.default_order,
                "provenance": ident.provenance.kind,
            }
        )
    return rows


def _with_side(exc: QThetaError, side: str) -> QThetaError:
    exc.path = f"{side}{exc.path}" if exc.path and exc.path.startswith("/") else f"{side}/{exc.path or ''}".rstrip("/")
    return exc


def evaluate_side(ident: Identity, side: str, order: int, stats: Dict[str, int] | None = None) -> QSeries:
    """Normal form of one side, validated then evaluated to ``order``."""

    node = ident.side(side)
    validation = validate_evaluable(node)
    try:
        validation.raise_for_error()
        return eval_expr(node, order, stats=stats)
    except QThetaError as exc:
        raise _with_side(exc, side)


def compare_series(lhs: QSeries, rhs: QSeries):
    if lhs.is_zero() and rhs.is_zero():
        return None
    return qs_diff_report(lhs, rhs)


def check_identity(identity: Identity | str, order: int | None = None, *, catalog: Catalog | None = None) -> Report:
    """Evaluate both normal forms to ``order`` and compare coefficient-wise."""

    ident = identity if isinstance(identity, Identity) else get_identity(identity, catalog)
    N = config.resolve_order(order, ident.default_order)
    if N < 1:
        raise UsageError(f"order must be >= 1, got {N}")
    stats: Dict[str, int] = {}
    with timed_event("check", id=ident.id, order=N) as span:
        try:
            lhs = evaluate_side(ident, "lhs", N, stats)
            rhs = evaluate_side(ident, "rhs", N, stats)
            mismatch = compare_series(lhs, rhs)
        except QThetaError as exc:
            span.note(status=STATUS_ERROR, error_code=exc.error_code, path=exc.path)
            return Report(
                ident.id, N, STATUS_ERROR, n_max_used=stats, elapsed_ms=span.elapsed_ms(), error=ReportError.from_exception(exc)
            )
        status = STATUS_PASS if mismatch is None else STATUS_MISMATCH
        span.note(status=status)
        return Report(ident.id, N, status, mismatch=mismatch, n_max_used=stats, elapsed_ms=span.elapsed_ms())


_FACTOR = re.compile(r"^(?P<name>[a-z])(?:\^(?P<exp>-?\d+))?$")


def parse_binding(value: Monomial | str) -> Monomial:
    """Parse one monomial such as ``"q/x"``, ``"-x*q^2"`` or ``"1/2*y"``."""

    if isinstance(value, Monomial):
        return value
    text = value.replace(" ", "")
    coef = Fraction(1)
    if text.startswith("-"):
        coef, text = -coef, text[1:]
    elif text.startswith("+"):
        text = text[1:]
    if not text:
        raise UsageError(f"empty binding {value!r}")
    exps = {name: 0 for name in ("q",) + VARS}
    for sign, token in _factors(text):
        match = _FACTOR.match(token)
        if match is None:
            try:
                number = Fraction(token)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"cannot read {token!r} in binding {value!r}") from None
            if number == 0:
                raise UsageError(f"binding {value!r} is zero")
            coef = coef * number if sign > 0 else coef / number
            continue
        name = match.group("name")
        if name not in exps:
            raise UsageError(f"unknown variable {name!r} in binding {value!r}")
        exps[name] += sign * int(match.group("exp") or 1)
    return Monomial(to_scalar(coef), exps["q"], tuple(exps[name] for name in VARS))


def _factors(text: str) -> Iterator[Tuple[int, str]]:
    sign = 1
    token = ""
    for ch in text:
        if ch in "*/":
            if not token:
                raise UsageError(f"malformed binding {text!r}")
            yield sign, token
            sign = -1 if ch == "/" else 1
            token = ""
        else:
            token += ch
    if not token:
        raise UsageError(f"malformed binding {text!r}")
    yield sign, token


def _transform(node: Expr | None, bindings: Mapping[str, Monomial], q_power: int) -> Expr | None:
    if node is None:
        return None
    if q_power != 1:
        node = rescale_q(node, q_power)
    return substitute(node, bindings) if bindings else node


def substitute_identity(
    identity: Identity | str,
    bindings: Mapping[str, Monomial | str],
    q_power: int = 1,
    *,
    new_id: str | None = None,
    catalog: Catalog | None = None,
) -> Identity:
    """Apply ``q -> q^q_power`` then the variable bindings to both sides.

    The result is unregistered; its normal forms must validate.
    """

    ident = identity if isinstance(identity, Identity) else get_identity(identity, catalog)
    resolved = {name: parse_binding(value) for name, value in bindings.items()}
    label = ",".join(f"{k}={v}" for k, v in sorted(resolved.items()))
    if q_power != 1:
        label = f"q=q^{q_power}" + (f",{label}" if label else "")
    derived = replace(
        ident,
        id=new_id or f"{ident.id}[{label}]",
        title=f"{ident.title} at {label}",
        stated_lhs=_transform(ident.stated_lhs, resolved, q_power),
        stated_rhs=_transform(ident.stated_rhs, resolved, q_power),
        multiplier=_transform(ident.multiplier, resolved, q_power),
        cleared_lhs=_transform(ident.cleared_lhs, resolved, q_power),
        cleared_rhs=_transform(ident.cleared_rhs, resolved, q_power),
        provenance=Provenance(
            SPECIALIZATION,
            f"derived from {ident.id}",
            tuple((k, str(v)) for k, v in sorted(resolved.items())),
        ),
    )
    for side in SIDES:
        validation = validate_evaluable(derived.side(side))
        if not validation.ok:
            try:
                validation.raise_for_error()
            except QThetaError as exc:
                raise _with_side(exc, side)
    _qtheta_event("substitute", source=ident.id, derived=derived.id)
    return derived


__all__ = [
    "Catalog",
    "load_catalog",
    "get_identity",
    "resolve_ids",
    "list_identities",
    "evaluate_side",
    "compare_series",
    "check_identity",
    "parse_binding",
    "substitute_identity",
]
