"""JSON formats for carriers, functions, family parameters, instances and reports."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .carrier import Carrier, CarrierError, FiniteCarrier, NonnegRealMulCarrier, RatAddCarrier, load_carrier
from .funcspace import (
    AdditiveFn,
    Character,
    ComplexFn,
    FunctionError,
    Poly,
    Term,
    analytic_additive,
    analytic_character,
    psi_extend,
    table_character,
)
from .families.build import FamilyInstance
from .families.catalog import FamilyParams, get_template

SCHEMA_VERSION = 1


class FormatError(ValueError):
    """Malformed input file; the message names the path and the offending field."""


# ------------------------------------------------------------------ scalars


def parse_complex(v: Any, where: str = "value") -> complex:
    """Number, "p/q" string, or [re, im] pair."""
    try:
        if isinstance(v, bool):
            raise TypeError
        if isinstance(v, (int, float)):
            return complex(v)
        if isinstance(v, str):
            return complex(float(Fraction(v)))
        if isinstance(v, (list, tuple)) and len(v) == 2:
            return complex(parse_complex(v[0], where).real, parse_complex(v[1], where).real)
    except (TypeError, ValueError, ZeroDivisionError):
        pass
    raise FormatError(f"{where}: expected a number, 'p/q' string or [re, im], got {v!r}")


def cjson(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _vec(v: Any, where: str) -> list[complex]:
    if not isinstance(v, list):
        v = [v]
    return [parse_complex(x, f"{where}[{i}]") for i, x in enumerate(v)]


# ------------------------------------------------------------------ characters and additive functions


def character_to_json(ch: Character) -> dict:
    if ch.form == "exp":
        return {"kind": "character", "form": "exp", "b": [cjson(v) for v in ch.params]}
    if ch.form == "power":
        return {"kind": "character", "form": "power", "s": cjson(ch.params[0])}
    if ch.form == "table":
        labels = ch.carrier.labels
        return {"kind": "character", "form": "table", "values": {labels[i]: cjson(v) for i, v in enumerate(ch.params)}}
    return {"kind": "character", "form": ch.form}


def _table_values(c: Carrier, values: Any, where: str) -> list[complex]:
    if not isinstance(c, FiniteCarrier):
        raise FormatError(f"{where}: table values need a finite carrier")
    if isinstance(values, dict):
        out = [0j] * c.size
        for k, v in values.items():
            try:
                out[c.index(k)] = parse_complex(v, f"{where}.{k}")
            except CarrierError as e:
                raise FormatError(f"{where}: {e}") from None
        missing = [lab for lab in c.labels if lab not in {str(k) for k in values}]
        if missing:
            raise FormatError(f"{where}: no value for element {missing[0]!r}")
        return out
    vals = _vec(values, where)
    if len(vals) != c.size:
        raise FormatError(f"{where}: need {c.size} values, got {len(vals)}")
    return vals


def character_from_json(c: Carrier, spec: dict, where: str = "character") -> Character:
    if not isinstance(spec, dict):
        raise FormatError(f"{where}: expected an object")
    form = spec.get("form")
    try:
        if form == "exp":
            return analytic_character(c, _vec(spec.get("b"), f"{where}.b"))
        if form == "power":
            return analytic_character(c, parse_complex(spec.get("s"), f"{where}.s"))
        if form in ("one", "zero") and not isinstance(c, FiniteCarrier):
            if isinstance(c, RatAddCarrier):
                if form == "zero":
                    raise FormatError(f"{where}: rat-add has no zero character form; use a zero function")
                return analytic_character(c, [0] * c.dim)
            return analytic_character(c, form=form)
        if form in ("one", "zero"):
            v = 1 if form == "one" else 0
            return table_character(c, [v] * c.size)
        if form == "table":
            return table_character(c, _table_values(c, spec.get("values"), f"{where}.values"))
    except FunctionError as e:
        raise FormatError(f"{where}: {e}") from None
    raise FormatError(f"{where}: unknown character form {form!r}")


def additive_to_json(a: AdditiveFn) -> dict:
    if a.alpha is not None:
        form = "log" if isinstance(a.carrier, NonnegRealMulCarrier) else "linear"
        return {"kind": "additive", "form": form, "alpha": [cjson(v) for v in a.alpha]}
    labels = a.carrier.labels
    return {"kind": "additive", "form": "table", "values": {labels[k]: cjson(v) for k, v in sorted(a.values.items())}}


def additive_from_json(c: Carrier, spec: dict, where: str = "additive") -> AdditiveFn:
    if not isinstance(spec, dict):
        raise FormatError(f"{where}: expected an object")
    form = spec.get("form", "table" if isinstance(c, FiniteCarrier) else "linear")
    try:
        if form in ("linear", "log"):
            return analytic_additive(c, _vec(spec.get("alpha"), f"{where}.alpha"))
        if form == "table":
            if not isinstance(c, FiniteCarrier) or not isinstance(spec.get("values"), dict):
                raise FormatError(f"{where}: table additive functions need a finite carrier and a values object")
            vals = {c.index(k): parse_complex(v, f"{where}.values.{k}") for k, v in spec["values"].items()}
            return AdditiveFn(c, values=vals)
    except (FunctionError, CarrierError) as e:
        raise FormatError(f"{where}: {e}") from None
    raise FormatError(f"{where}: unknown additive form {form!r}")


# ------------------------------------------------------------------ functions


def _poly_json(p: Poly) -> dict:
    return {"const": cjson(p.const), "lin": [cjson(v) for v in p.lin], "quad": [[cjson(v) for v in r] for r in p.quad]}


def _poly_from(c: Carrier, spec: dict, where: str) -> Poly:
    d = c.dim
    const = parse_complex(spec.get("const", 0), f"{where}.const")
    lin = np.asarray(_vec(spec.get("lin", [0] * d), f"{where}.lin"), complex) if d else np.zeros(0, complex)
    if lin.shape != (d,):
        raise FormatError(f"{where}.lin: expected {d} entries")
    q = spec.get("quad")
    if q is None:
        quad = np.zeros((d, d), complex)
    else:
        if not isinstance(q, list) or len(q) != d:
            raise FormatError(f"{where}.quad: expected a {d}x{d} matrix")
        quad = np.asarray([_vec(r, f"{where}.quad") for r in q], complex).reshape(d, d)
    return Poly(const, lin, quad)


def function_to_json(fn: ComplexFn) -> dict:
    """Closed-form functions serialise as a sum of character-times-polynomial terms; others as tables."""
    c = fn.carrier
    if fn.nf is not None:
        terms = []
        for t in sorted(fn.nf.values(), key=lambda t: repr(t.chi.key)):
            terms.append({"kind": "poly", "chi": character_to_json(t.chi), **_poly_json(t.poly)})
        return {"kind": "sum", "terms": [{"coef": [1.0, 0.0], "fn": t} for t in terms]}
    if isinstance(c, FiniteCarrier):
        vals = fn.evaluate(c.encode(list(c.elements)))
        return {"kind": "table", "values": {c.labels[i]: cjson(v) for i, v in enumerate(vals)}}
    raise FormatError("function has no closed form and the carrier is infinite; cannot serialise")


def function_from_json(c: Carrier, spec: Any, where: str = "function") -> ComplexFn:
    if isinstance(spec, (int, float, str)) and not isinstance(spec, bool):
        if parse_complex(spec, where) == 0:
            return ComplexFn.zero(c)
        raise FormatError(f"{where}: a bare number is only accepted for the zero function")
    if not isinstance(spec, dict):
        raise FormatError(f"{where}: expected an object")
    kind = spec.get("kind")
    if kind == "zero":
        return ComplexFn.zero(c)
    if kind == "character":
        return character_from_json(c, spec, where).as_function()
    if kind == "additive":
        a = additive_from_json(c, spec, where)
        if a.alpha is not None and isinstance(c, RatAddCarrier):
            return psi_extend(analytic_character(c, [0] * c.dim), a)
        return ComplexFn(c, fn=a.evaluate, name="additive")
    if kind == "psi":
        chi = character_from_json(c, spec.get("chi"), f"{where}.chi")
        phi_spec = spec.get("phi")
        if isinstance(phi_spec, dict) and phi_spec.get("kind") == "additive":
            phi: Any = additive_from_json(c, phi_spec, f"{where}.phi")
        elif isinstance(phi_spec, dict) and phi_spec.get("kind") == "poly":
            phi = _poly_from(c, phi_spec, f"{where}.phi")
        else:
            phi = parse_complex(phi_spec, f"{where}.phi")
        try:
            return psi_extend(chi, phi)
        except FunctionError as e:
            raise FormatError(f"{where}: {e}") from None
    if kind == "poly":
        chi = character_from_json(c, spec.get("chi"), f"{where}.chi")
        try:
            return psi_extend(chi, _poly_from(c, spec, where))
        except FunctionError as e:
            raise FormatError(f"{where}: {e}") from None
    if kind == "table":
        vals = _table_values(c, spec.get("values"), f"{where}.values")
        return ComplexFn.from_table(c, vals)
    if kind == "sum":
        terms = spec.get("terms")
        if not isinstance(terms, list):
            raise FormatError(f"{where}.terms: expected a list")
        out = ComplexFn.zero(c)
        for i, t in enumerate(terms):
            if not isinstance(t, dict) or "fn" not in t:
                raise FormatError(f"{where}.terms[{i}]: expected {{'coef': ..., 'fn': ...}}")
            coef = parse_complex(t.get("coef", 1), f"{where}.terms[{i}].coef")
            out = out + coef * function_from_json(c, t["fn"], f"{where}.terms[{i}].fn")
        return out
    raise FormatError(f"{where}: unknown function kind {kind!r}")


# ------------------------------------------------------------------ family parameters and instances


def params_to_json(p: FamilyParams) -> dict:
    return {
        "scalars": {k: cjson(v) for k, v in sorted(p.scalars.items())},
        "characters": {k: character_to_json(v) for k, v in sorted(p.characters.items())},
        "additives": {k: additive_to_json(v) for k, v in sorted(p.additives.items())},
        "lambda1": cjson(p.lambda1),
        "lambda2": cjson(p.lambda2),
    }


def params_from_json(c: Carrier, spec: dict, where: str = "params") -> FamilyParams:
    if not isinstance(spec, dict):
        raise FormatError(f"{where}: expected an object")
    p = FamilyParams(
        lambda1=parse_complex(spec.get("lambda1", 0), f"{where}.lambda1"),
        lambda2=parse_complex(spec.get("lambda2", 0), f"{where}.lambda2"),
    )
    for k, v in (spec.get("scalars") or {}).items():
        p.scalars[k] = parse_complex(v, f"{where}.scalars.{k}")
    for k, v in (spec.get("characters") or {}).items():
        p.characters[k] = character_from_json(c, v, f"{where}.characters.{k}")
    for k, v in (spec.get("additives") or {}).items():
        p.additives[k] = additive_from_json(c, v, f"{where}.additives.{k}")
    return p


def instance_to_json(inst: FamilyInstance) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "family": inst.id,
        "carrier": inst.carrier.to_json(),
        "params": params_to_json(inst.params),
        "variant": inst.variant,
        "errata_status": inst.errata_status,
        "lambda1": cjson(inst.params.lambda1),
        "lambda2": cjson(inst.params.lambda2),
        "components": {n: function_to_json(f) for n, f in zip(inst.names, inst.components)},
    }


COMPONENT_ORDERS = (("f", "g1", "h", "g2"), ("f", "g", "h"), ("f", "g"))


def solution_from_json(spec: dict, carrier: Carrier | None = None, where: str = "solution"):
    """Carrier, ordered component names and functions of a solution or instance file."""
    if not isinstance(spec, dict):
        raise FormatError(f"{where}: expected an object")
    if carrier is None:
        if "carrier" not in spec:
            raise FormatError(f"{where}: no carrier given in the file or on the command line")
        try:
            carrier = load_carrier(spec["carrier"])
        except CarrierError as e:
            raise FormatError(f"{where}.carrier: {e}") from None
    comps = spec.get("components")
    if not isinstance(comps, dict):
        raise FormatError(f"{where}.components: expected an object keyed by component name")
    for order in COMPONENT_ORDERS:
        if set(comps) == set(order):
            fns = [function_from_json(carrier, comps[n], f"{where}.components.{n}") for n in order]
            return carrier, order, fns
    raise FormatError(f"{where}.components: expected keys {{f,g}}, {{f,g,h}} or {{f,g1,h,g2}}, got {sorted(comps)}")


# ------------------------------------------------------------------ reports


def clean(obj: Any) -> Any:
    """Plain JSON values: complex as [re, im], numpy scalars unwrapped, non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    if isinstance(obj, (complex, np.complexfloating)):
        return [clean(obj.real), clean(obj.imag)]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def dumps(report: dict) -> str:
    return json.dumps(clean(report), sort_keys=True, indent=2) + "\n"


def read_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise FormatError(f"{p}: cannot read ({e.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{p}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None


def template_to_json(fid: str) -> dict:
    t = get_template(fid)
    return {
        "id": t.id,
        "group": t.group,
        "components": list(t.components),
        "characters": list(t.characters),
        "psi_slot": t.psi_slot,
        "additives": list(t.additives),
        "scalars": list(t.scalars),
        "free_scalars": list(t.free),
        "formulas": dict(t.formulas),
        "constraints": [c.name for c in t.constraints],
        "adopted_constraints": [c.name for c in t.adopted],
        "errata_status": t.status,
        "errata": t.errata,
        "interpretation": t.interpretation,
    }
