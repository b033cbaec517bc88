"""Decide by substitution whether a printed family solves its equations, and repair it if not.

Protocol per family:

1. Sample parameters satisfying the printed constraints and evaluate the
   printed formulas. Passing within tolerance gives the verdict ``as-printed``.
2. Otherwise try, in order: each candidate constraint taken from the proof on
   its own; linear refits of failing components inside the template's ansatz
   span; a candidate constraint together with refits.
3. A refit solves for the coefficients of one component over the template's
   character and Psi terms, by least squares on the equation in which that
   component enters linearly, and is accepted only if the whole system then
   verifies to ``REFIT_TOL`` on every sample.

The fitted coefficients are compared with the closed-form corrected variant in
the catalog, so the catalog correction is checked rather than trusted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..carrier import Carrier, rat_add
from ..funcspace import ComplexFn, linear_independence, psi_extend
from ..laws import ResidualReport
from .build import build_instance, component_residual
from .catalog import FAMILY_IDS, FamilyParams, Template, get_template
from .sampling import sample_params, seeded_lambdas

PRINTED_TOL = 1e-9
REFIT_TOL = 1e-12
DEFAULT_SAMPLES = 4

# (component, equation index) pairs in which the component enters linearly
LINEAR_SLOTS = {
    2: [("g", 0)],
    3: [("g", 0), ("f", 0)],
    4: [("g1", 0), ("g2", 1), ("h", 1), ("f", 0)],
}


@dataclass
class Refit:
    component: str
    equation: str
    basis: list[str]
    printed: list[complex]
    fitted: list[complex]
    closed_form: list[complex] | None
    fit_vs_closed_form: float | None

    def to_json(self) -> dict:
        def cj(v):
            return [[float(z.real), float(z.imag)] for z in v]

        return {
            "component": self.component,
            "equation": self.equation,
            "basis": self.basis,
            "printed": cj(self.printed),
            "fitted": cj(self.fitted),
            "closed_form": cj(self.closed_form) if self.closed_form is not None else None,
            "fit_vs_closed_form": self.fit_vs_closed_form,
        }


@dataclass
class Attempt:
    stage: str
    constraint: str | None
    components: list[str]
    max_relative_residual: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "constraint": self.constraint,
            "refit": self.components,
            "max_relative_residual": self.max_relative_residual,
            "passed": self.passed,
        }


@dataclass
class AdjudicationRecord:
    family: str
    verdict: str
    printed_residual: float
    printed_per_equation: dict
    corrected_residual: float | None
    adopted_constraints: list[str]
    refits: list[Refit]
    attempts: list[Attempt]
    samples: int
    catalog_status: str
    catalog_errata: str
    interpretation: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def consistent_with_catalog(self) -> bool:
        if self.verdict != self.catalog_status:
            return False
        t = get_template(self.family)
        if sorted(self.adopted_constraints) != sorted(c.name for c in t.adopted):
            return False
        return all(r.fit_vs_closed_form is not None and r.fit_vs_closed_form <= 1e-9 for r in self.refits)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "verdict": self.verdict,
            "printed": {"max_relative_residual": self.printed_residual, "per_equation": self.printed_per_equation},
            "corrected": None
            if self.corrected_residual is None
            else {
                "max_relative_residual": self.corrected_residual,
                "adopted_constraints": self.adopted_constraints,
                "refits": [r.to_json() for r in self.refits],
            },
            "attempts": [a.to_json() for a in self.attempts],
            "samples": self.samples,
            "catalog": {
                "errata_status": self.catalog_status,
                "errata": self.catalog_errata,
                "consistent": self.consistent_with_catalog,
            },
            "interpretation": self.interpretation,
            "notes": self.notes,
        }


def ansatz_basis(t: Template, p: FamilyParams) -> tuple[list[str], list[ComplexFn]]:
    """Character and Psi terms from which every printed component is assembled."""
    names, fns = [], []
    for n in t.characters:
        names.append(n)
        fns.append(p[n].as_function())
    if t.psi_slot:
        chi = p[t.psi_slot]
        A = p["A"]
        names.append(f"Psi_{t.psi_slot}(A)")
        fns.append(psi_extend(chi, A))
        if "A1" in t.additives:
            names += [f"Psi_{t.psi_slot}(A1)", f"Psi_{t.psi_slot}(A^2)"]
            fns += [psi_extend(chi, p["A1"]), psi_extend(chi, A * A)]
    return names, fns


def _equation_residual(comps, p: FamilyParams, eq: int) -> np.ndarray:
    rep = component_residual(comps, p.lambda1, p.lambda2)
    return rep.per_equation[eq].values


def coefficients(fn: ComplexFn, basis: list[ComplexFn]) -> tuple[np.ndarray, float]:
    """Least-squares coordinates of fn in the basis on the fit grid, with the relative misfit."""
    c = fn.carrier
    _, enc = c.fit_grid
    M = np.column_stack([b.evaluate(enc) for b in basis])
    y = fn.evaluate(enc)
    coef, *_ = np.linalg.lstsq(M, y, rcond=None)
    mis = float(np.max(np.abs(M @ coef - y), initial=0.0) / max(np.max(np.abs(y), initial=0.0), 1e-300))
    return coef, mis


def refit_component(comps, names, comp: str, eq: int, p: FamilyParams, basis: list[ComplexFn]):
    """Replace one component by the best ansatz combination for equation eq (affine in that component)."""
    k = names.index(comp)
    trial = list(comps)
    trial[k] = ComplexFn.zero(comps[0].carrier)
    r0 = _equation_residual(trial, p, eq)
    cols = []
    for b in basis:
        trial[k] = b
        cols.append(_equation_residual(trial, p, eq) - r0)
    M = np.column_stack(cols)
    scale = np.max(np.abs(M), axis=0)
    scale[scale == 0] = 1
    theta, *_ = np.linalg.lstsq(M / scale, -r0, rcond=None)
    theta = theta / scale
    new = ComplexFn.zero(comps[0].carrier)
    for t_, b in zip(theta, basis):
        new = new + complex(t_) * b
    out = list(comps)
    out[k] = new
    return out, theta


@dataclass
class _Sample:
    params: FamilyParams
    comps: list[ComplexFn]
    basis_names: list[str]
    basis: list[ComplexFn]


def _samples(t: Template, carrier: Carrier, seeds, with_adopted: bool) -> list[_Sample]:
    out = []
    for s in seeds:
        l1, l2 = seeded_lambdas(t.id, s)
        p = sample_params(t.id, carrier, l1, l2, s, variant="effective" if with_adopted else "printed")
        inst = build_instance(t.id, p, "printed", validate=False)
        names, basis = ansatz_basis(t, inst.params)
        out.append(_Sample(inst.params, list(inst.components), names, basis))
    return out


def _max_rel(reports: list[ResidualReport]) -> float:
    return max(r.relative for r in reports)


def _try_refits(t: Template, samples: list[_Sample], plan: list[tuple[str, int]]):
    reports, thetas, comps_all = [], [], []
    for s in samples:
        comps = list(s.comps)
        th = []
        for comp, eq in plan:
            comps, theta = refit_component(comps, list(t.components), comp, eq, s.params, s.basis)
            th.append(theta)
        rep = component_residual(comps, s.params.lambda1, s.params.lambda2)
        if t.arity > 2 and not linear_independence(comps[0], comps[2]):
            rep = None
        reports.append(rep)
        thetas.append(th)
        comps_all.append(comps)
    if any(r is None for r in reports):
        return float("inf"), thetas, comps_all
    return _max_rel(reports), thetas, comps_all


def _plans(t: Template) -> list[list[tuple[str, int]]]:
    slots = LINEAR_SLOTS[t.arity]
    if t.group == "t1":
        slots = [s for s in slots if s[0] != "f"]  # homogeneous in f when lambda1 = 0
    plans = [[s] for s in slots]
    plans += [list(pr) for pr in itertools.permutations(slots, 2) if pr[0][0] != pr[1][0]]
    return plans


def adjudicate(
    family_id: str, carrier: Carrier | None = None, samples: int = DEFAULT_SAMPLES
) -> AdjudicationRecord:
    t = get_template(family_id)
    carrier = carrier or rat_add(2)
    seeds = list(range(samples))
    base = _samples(t, carrier, seeds, with_adopted=False)
    reps = [component_residual(s.comps, s.params.lambda1, s.params.lambda2) for s in base]
    printed = _max_rel(reps)
    per_eq = {}
    for r in reps:
        for e in r.per_equation:
            per_eq[e.name] = max(per_eq.get(e.name, 0.0), e.relative)
    rec = AdjudicationRecord(
        family_id, "as-printed", printed, per_eq, None, [], [], [], samples, t.status, t.errata, t.interpretation
    )
    if printed <= PRINTED_TOL:
        return rec

    candidates = list(t.adopted)
    stages: list[tuple[str, object, list]] = []
    for c in candidates:
        stages.append(("constraint", c, []))
    for plan in _plans(t):
        stages.append(("refit", None, plan))
    for c in candidates:
        for plan in _plans(t):
            stages.append(("constraint+refit", c, plan))

    cache: dict = {}
    for stage, cons, plan in stages:
        key = cons.name if cons is not None else None
        if key not in cache:
            cache[key] = base if cons is None else _samples(t, carrier, seeds, with_adopted=True)
        smp = cache[key]
        if not plan:
            r = _max_rel([component_residual(s.comps, s.params.lambda1, s.params.lambda2) for s in smp])
            thetas = None
        else:
            r, thetas, _ = _try_refits(t, smp, plan)
        passed = r <= REFIT_TOL if plan else r <= PRINTED_TOL
        rec.attempts.append(Attempt(stage, key, [c for c, _ in plan], float(r), bool(passed)))
        if not passed:
            continue
        rec.verdict = "corrected"
        rec.corrected_residual = float(r)
        rec.adopted_constraints = [key] if key else []
        for (comp, eq), theta in zip(plan, thetas[0] if thetas else []):
            s0 = smp[0]
            k = list(t.components).index(comp)
            printed_coef, _ = coefficients(s0.comps[k], s0.basis)
            closed = None
            gap = None
            if t.corrected is not None or t.adopted:
                ref = build_instance(t.id, s0.params, "effective", validate=False).components[k]
                closed, _ = coefficients(ref, s0.basis)
                gap = float(np.max(np.abs(closed - theta)) / max(np.max(np.abs(closed)), 1e-300))
            rec.refits.append(
                Refit(comp, f"eq{eq + 1}" if t.arity == 4 else "law", s0.basis_names, list(printed_coef),
                      list(theta), None if closed is None else list(closed), gap)
            )
        break
    else:
        rec.verdict = "unresolved"
    return rec


def adjudicate_all(samples: int = DEFAULT_SAMPLES) -> list[AdjudicationRecord]:
    return [adjudicate(fid, samples=samples) for fid in FAMILY_IDS]
