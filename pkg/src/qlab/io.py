"""JSON loaders for quantales, modules, spaces and closed-set lists."""

from __future__ import annotations

import json
from pathlib import Path

from .order import Carrier, InputError, ValidationReport, check_table_shape, validate_carrier
from .quantale import (
    FiniteQModule,
    FiniteQuantale,
    build_chain_family,
    build_ideal_quantale,
    build_open_set_quantale,
    product_quantale,
    validate_module,
    validate_quantale,
)


class ValidationFailed(InputError):
    """Structurally well-formed input that breaks an axiom; carries the report."""

    def __init__(self, what: str, report: ValidationReport):
        first = report.violations[0]
        super().__init__(f"{what} violates {first.axiom} at {list(first.witness)}")
        self.report = report


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _field(data: dict, key: str):
    if key not in data:
        raise InputError(f"missing field {key!r}")
    return data[key]


def _int_table(table, what: str):
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise InputError(f"{what} must be a list of rows")
    for row in table:
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool):
                raise InputError(f"{what} entries must be integer handles")
    return table


def _carrier(data: dict) -> Carrier:
    names = _field(data, "names")
    if not isinstance(names, list) or not names:
        raise InputError("names must be a nonempty list")
    join = _int_table(_field(data, "join"), "join")
    top = _field(data, "top")
    if not isinstance(top, int) or not 0 <= top < len(names):
        raise InputError("top must be an element handle")
    rep = validate_carrier_shape(names, join)
    if not rep.ok:
        raise ValidationFailed("carrier", rep)
    c = Carrier.from_table([str(x) for x in names], join, top)
    rep = validate_carrier(c)
    if not rep.ok:
        raise ValidationFailed("carrier", rep)
    return c


def validate_carrier_shape(names, join) -> ValidationReport:
    rep = ValidationReport()
    check_table_shape(join, len(names), len(names), len(names), "join", rep)
    return rep


def quantale_from_json(data) -> FiniteQuantale:
    if not isinstance(data, dict):
        raise InputError("a quantale description must be a JSON object")
    kind = data.get("kind", "table")
    if kind == "table":
        c = _carrier(data)
        mult = _int_table(_field(data, "mult"), "mult")
        rep = ValidationReport()
        if not check_table_shape(mult, c.size, c.size, c.size, "mult", rep):
            raise ValidationFailed("quantale", rep)
        q = FiniteQuantale(c, tuple(tuple(r) for r in mult))
    elif kind == "chain":
        n = _field(data, "n")
        if not isinstance(n, int) or isinstance(n, bool):
            raise InputError("n must be an integer")
        q = build_chain_family(str(_field(data, "family")), n)
    elif kind == "topology":
        q = build_open_set_quantale(_field(data, "points"), _field(data, "opens"))
    elif kind == "zn-ideals":
        n = _field(data, "n")
        if not isinstance(n, int) or isinstance(n, bool):
            raise InputError("n must be an integer")
        q = build_ideal_quantale(n)
    elif kind == "product":
        factors = _field(data, "factors")
        if not isinstance(factors, list) or len(factors) < 2:
            raise InputError("a product needs a list of at least two factors")
        q = quantale_from_json(factors[0])
        for f in factors[1:]:
            q = product_quantale(q, quantale_from_json(f))
    else:
        raise InputError(f"unknown quantale kind {kind!r}")
    rep = validate_quantale(q)
    if not rep.ok:
        raise ValidationFailed("quantale", rep)
    return q


def module_from_json(q: FiniteQuantale, data) -> FiniteQModule:
    if not isinstance(data, dict) or data.get("kind") != "module":
        raise InputError('a module description must be an object with "kind": "module"')
    c = _carrier(data)
    action = _int_table(_field(data, "action"), "action")
    rep = ValidationReport()
    if not check_table_shape(action, q.size, c.size, c.size, "action", rep):
        raise ValidationFailed("module", rep)
    mod = FiniteQModule(q, c, tuple(tuple(r) for r in action))
    rep = validate_module(mod)
    if not rep.ok:
        raise ValidationFailed("module", rep)
    return mod


def load_quantale(path) -> FiniteQuantale:
    return quantale_from_json(read_json(path))


def load_module(q: FiniteQuantale, path) -> FiniteQModule:
    return module_from_json(q, read_json(path))


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
