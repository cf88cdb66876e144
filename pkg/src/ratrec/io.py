"""JSON formats for systems, P-recurrences and results.

All scalars are written as decimal strings ("6", "3/2").  Serialization is
canonical: emitting, re-parsing and emitting again gives identical bytes.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Tuple

from .algebra.fields import Field, QQ
from .algebra.parse import identifiers, parse_expr
from .algebra.polynomial import PolyRing
from .circuits import Circuit, circuit_from_json, circuit_to_json
from .errors import ParseError
from .recsys import (
    InitialCondition,
    Numeric,
    PRecurrence,
    RecSystem,
    Symbolic,
    SymbolicCustom,
    make_update_ring,
)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc.msg}", exc.pos) from exc


# -- systems ---------------------------------------------------------------------

def initial_to_json(init: InitialCondition, field: Field) -> dict:
    if isinstance(init, Numeric):
        return {"numeric": [field.format(field(v)) for v in init.values]}
    if isinstance(init, Symbolic):
        return {"symbolic": True}
    return {
        "symbolic_custom": [v.to_str() for v in init.values],
        "symbolic_vars": list(init.ring.names),
    }


def system_to_json(sys: RecSystem, init: InitialCondition | None = None) -> dict:
    updates = []
    for name, u in zip(sys.names, sys.updates):
        if isinstance(u, Circuit):
            updates.append({"name": name, "circuit": circuit_to_json(u)})
        else:
            updates.append({"name": name, "expr": u.to_str()})
    obj = {
        "field": sys.field.to_json(),
        "names": list(sys.names),
        "main": sys.names[sys.main],
        "extended": sys.extended,
        "updates": updates,
    }
    if init is not None:
        obj["initial"] = initial_to_json(init, sys.field)
    return obj


def _initial_from_json(obj: dict, field: Field, k: int) -> InitialCondition:
    if not isinstance(obj, dict) or len(set(obj) - {"symbolic_vars"}) != 1:
        raise ParseError("'initial' must have exactly one of numeric / symbolic / symbolic_custom")
    if "numeric" in obj:
        vals = obj["numeric"]
        if len(vals) != k:
            raise ParseError(f"numeric initial condition has {len(vals)} values, expected {k}")
        return Numeric(tuple(field.parse(str(v)) for v in vals))
    if "symbolic" in obj:
        if obj["symbolic"] is not True:
            raise ParseError("'symbolic' must be true")
        return Symbolic()
    if "symbolic_custom" in obj:
        exprs = [str(e) for e in obj["symbolic_custom"]]
        if len(exprs) != k:
            raise ParseError(f"custom initial condition has {len(exprs)} values, expected {k}")
        names = obj.get("symbolic_vars")
        if names is None:
            names = []
            for e in exprs:
                for v in identifiers(e):
                    if v not in names:
                        names.append(v)
            names = names or ["x"]
        ring = PolyRing(field, list(names))
        return SymbolicCustom(tuple(parse_expr(e, ring) for e in exprs))
    raise ParseError(f"unknown initial condition kind {sorted(obj)}")


def system_from_json(obj: dict, field: Field | None = None) -> Tuple[RecSystem, Optional[InitialCondition]]:
    """Parse a system (and its initial condition, if present).

    ``field`` reinterprets every coefficient in another field.
    """
    if not isinstance(obj, dict):
        raise ParseError("a system must be a JSON object")
    try:
        fld = field or Field.from_json(obj.get("field", "Q"))
        names = [str(n) for n in obj["names"]]
        if len(set(names)) != len(names):
            raise ParseError("duplicate sequence names")
        extended = bool(obj.get("extended", False))
        main_name = obj.get("main", names[0] if names else None)
        if main_name not in names:
            raise ParseError(f"main sequence {main_name!r} is not among the names")
        by_name = {}
        for u in obj["updates"]:
            by_name[str(u["name"])] = u
        if sorted(by_name) != sorted(names):
            raise ParseError("updates must name each sequence exactly once")
        ring = make_update_ring(fld, names, extended)
        updates = []
        for n in names:
            u = by_name[n]
            if "expr" in u:
                updates.append(parse_expr(str(u["expr"]), ring))
            elif "circuit" in u:
                updates.append(circuit_from_json(u["circuit"], fld))
            else:
                raise ParseError(f"update for {n!r} has neither 'expr' nor 'circuit'")
        try:
            sys = RecSystem(fld, tuple(names), tuple(updates), extended, names.index(main_name))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc)) from exc
        init = None
        if "initial" in obj:
            init = _initial_from_json(obj["initial"], fld, len(names))
        return sys, init
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed system JSON: missing or bad field {exc}") from exc


# -- P-recurrences -------------------------------------------------------------------

def precursive_to_json(rec: PRecurrence) -> dict:
    return {
        "d": rec.d,
        "coeffs": [p.to_str() for p in rec.coeffs],
        "initial": [QQ.format(v) for v in rec.initial],
    }


def precursive_from_json(obj: dict) -> PRecurrence:
    try:
        coeffs = [str(c) for c in obj["coeffs"]]
        if "d" in obj and int(obj["d"]) != len(coeffs) - 1:
            raise ParseError(f"order d = {obj['d']} does not match {len(coeffs)} coefficients")
        initial = [QQ.parse(str(v)) for v in obj["initial"]]
        try:
            return PRecurrence.from_exprs(coeffs, initial)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc)) from exc
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed P-recurrence JSON: {exc}") from exc
