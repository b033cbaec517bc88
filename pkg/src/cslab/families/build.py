"""Constructing, validating and serialising family instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..carrier import Carrier, FiniteCarrier
from ..funcspace import AdditiveFn, Character, ComplexFn
from ..laws import ResidualReport, residual_cosine_sine, residual_sine, residual_system
from .catalog import DegenerateParameters, FamilyParams, Template, TemplateError, get_template

EQ_TOL = 1e-12
NEQ_TOL = 1e-12
CHAR_MERGE_TOL = 1e-8


class ConstraintViolation(TemplateError):
    def __init__(self, name: str, magnitude: float):
        super().__init__(f"constraint {name} violated (magnitude {magnitude:.3e})")
        self.constraint = name
        self.magnitude = magnitude


@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    satisfied: bool
    magnitude: float
    source: str  # printed | adopted | structural

    def to_json(self) -> dict:
        return {"name": self.name, "satisfied": self.satisfied, "magnitude": self.magnitude, "source": self.source}


def characters_coincide(a: Character, b: Character, tol: float = CHAR_MERGE_TOL) -> bool:
    """True when two characters differ by less than tol uniformly on the window."""
    if a.key == b.key:
        return True
    c = a.carrier
    pts = c.elements if isinstance(c, FiniteCarrier) else c.window
    enc = c.encode(list(pts))
    va, vb = a.evaluate(enc), b.evaluate(enc)
    return bool(np.max(np.abs(va - vb)) < tol * max(1.0, np.max(np.abs(va)), np.max(np.abs(vb))))


def structural_checks(t: Template, p: FamilyParams) -> list[ConstraintCheck]:
    out = []
    for name in t.characters:
        present = isinstance(p.characters.get(name), Character)
        out.append(ConstraintCheck(f"{name} is a character", present, 0.0, "structural"))
    for name in t.additives:
        present = isinstance(p.additives.get(name), AdditiveFn)
        out.append(ConstraintCheck(f"{name} is an additive function", present, 0.0, "structural"))
    if not all(c.satisfied for c in out):
        return out
    names = list(t.characters)
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            same = characters_coincide(p[names[i]], p[names[j]])
            out.append(ConstraintCheck(f"{names[i]}!={names[j]}", not same, 0.0, "structural"))
    if t.psi_slot:
        chi = p[t.psi_slot]
        out.append(ConstraintCheck(f"{t.psi_slot}!=0", not chi.is_zero, 0.0, "structural"))
        a = p["A"]
        out.append(ConstraintCheck("A!=0", not a.is_zero, 0.0, "structural"))
        if isinstance(chi.carrier, FiniteCarrier):
            out.append(ConstraintCheck("carrier hosts A!=0 (additive dimension >= 1)", False, 0.0, "structural"))
        elif chi.form == "one" and a.alpha is not None and chi.carrier.kind == "nonneg-real-mul":
            out.append(ConstraintCheck(f"A defined on S minus I_{t.psi_slot}", False, 0.0, "structural"))
    return out


def _scalar_checks(t: Template, p: FamilyParams, variant: str, tol: float) -> list[ConstraintCheck]:
    out = []
    cons = [(c, "printed") for c in t.constraints]
    if variant != "printed":
        cons += [(c, "adopted") for c in t.adopted]
    for c, src in cons:
        try:
            mag, rel = c.measure(p)
        except (KeyError, ZeroDivisionError) as e:
            out.append(ConstraintCheck(c.name, False, float("nan"), src))
            continue
        ok = rel <= tol if c.kind == "eq" else rel > NEQ_TOL
        out.append(ConstraintCheck(c.name, bool(ok), float(rel if c.kind == "eq" else mag), src))
    return out


def validate_constraints(
    family_id: str, params: FamilyParams, variant: str = "effective", tol: float = EQ_TOL
) -> list[ConstraintCheck]:
    """Evaluate every structural and scalar constraint of the template."""
    t = get_template(family_id)
    out = structural_checks(t, params)
    if not all(c.satisfied for c in out):
        return out
    p = params
    if t.derive is not None:
        try:
            p = t.derive(params)
        except DegenerateParameters as e:
            return out + [ConstraintCheck(str(e), False, 0.0, "printed")]
    return out + _scalar_checks(t, p, variant, tol)


def violations(checks: list[ConstraintCheck]) -> list[ConstraintCheck]:
    return [c for c in checks if not c.satisfied]


@dataclass
class FamilyInstance:
    id: str
    params: FamilyParams
    components: tuple[ComplexFn, ...]
    variant: str
    errata_status: str

    @property
    def template(self) -> Template:
        return get_template(self.id)

    @property
    def carrier(self) -> Carrier:
        return self.components[0].carrier

    @property
    def names(self) -> tuple[str, ...]:
        return self.template.components

    @property
    def quadruple(self) -> tuple[ComplexFn, ...]:
        return self.components

    def residual(self) -> ResidualReport:
        return component_residual(self.components, self.params.lambda1, self.params.lambda2)


def component_residual(comps, lambda1=0j, lambda2=0j) -> ResidualReport:
    if len(comps) == 2:
        return residual_sine(*comps)
    if len(comps) == 3:
        return residual_cosine_sine(*comps)
    return residual_system(*comps, lambda1, lambda2)


def errata_status(t: Template, variant: str) -> str:
    if variant == "printed" or t.status == "as-printed":
        return "as-printed"
    return f"corrected({t.errata})"


def build_instance(
    family_id: str, params: FamilyParams, variant: str = "effective", validate: bool = True
) -> FamilyInstance:
    """Build a family instance; variant is 'effective' (corrected where needed) or 'printed'."""
    if variant not in ("effective", "printed", "corrected"):
        raise TemplateError(f"unknown variant {variant!r}")
    t = get_template(family_id)
    if t.group == "t1" and params.lambda2 == 0:
        raise TemplateError("lambda2 must be nonzero")
    if t.group == "t2" and (params.lambda1 == 0 or params.lambda2 == 0):
        raise TemplateError("lambda1 and lambda2 must be nonzero")
    if validate:
        bad = violations(validate_constraints(family_id, params, variant))
        if bad:
            raise ConstraintViolation(bad[0].name, bad[0].magnitude)
    p = t.derive(params) if t.derive is not None else params
    comps = t.build(p, "printed" if variant == "printed" else "effective")
    return FamilyInstance(family_id, p, tuple(comps), variant, errata_status(t, variant))


def _require_group(family_id: str, group: str):
    t = get_template(family_id)
    if t.group != group:
        raise TemplateError(f"{family_id} is not a {group} family")


def build_p41(family_id: str, params: FamilyParams) -> tuple[ComplexFn, ComplexFn]:
    _require_group(family_id, "p41")
    return build_instance(family_id, params).components


def build_p42(family_id: str, params: FamilyParams, delta: complex) -> tuple[ComplexFn, ComplexFn, ComplexFn]:
    _require_group(family_id, "p42")
    return build_instance(family_id, params.with_scalars(delta=delta)).components


def build_t1(family_id: str, params: FamilyParams, lambda2: complex, variant: str = "effective") -> FamilyInstance:
    _require_group(family_id, "t1")
    p = params.copy()
    p.lambda1, p.lambda2 = 0j, complex(lambda2)
    return build_instance(family_id, p, variant)


def build_t2(
    family_id: str, params: FamilyParams, lambda1: complex, lambda2: complex, variant: str = "effective"
) -> FamilyInstance:
    _require_group(family_id, "t2")
    p = params.copy()
    p.lambda1, p.lambda2 = complex(lambda1), complex(lambda2)
    return build_instance(family_id, p, variant)
