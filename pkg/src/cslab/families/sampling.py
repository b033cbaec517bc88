"""Seeded sampling of constraint-satisfying family parameters."""

from __future__ import annotations

import zlib

import numpy as np

from ..carrier import Carrier, FiniteCarrier, NonnegRealMulCarrier, RatAddCarrier, nonneg_real_mul, rat_add, zmod_add
from ..funcspace import Character, analytic_additive, analytic_character, enumerate_characters, linear_independence
from .build import FamilyInstance, build_instance, characters_coincide, structural_checks, violations, validate_constraints
from .catalog import DegenerateParameters, FamilyParams, TemplateError, get_template

ANNULUS = (0.3, 3.0)
MAX_ATTEMPTS = 100
# exponent bounds keep exp-characters of order e^3 on the default windows
RAT_EXP_RADIUS = 0.9
POWER_EXP_RADIUS = 1.2
CHAR_SEPARATION = 0.3
DEGENERACY_MARGIN = 1e-3
SCALAR_RANGE = (1e-3, 1e3)


class SamplingError(TemplateError):
    pass


def family_rng(family_id: str, seed: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(family_id.encode())])


def annulus(rng: np.random.Generator, lo: float = ANNULUS[0], hi: float = ANNULUS[1]) -> complex:
    r = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
    return complex(r * np.exp(1j * rng.uniform(0, 2 * np.pi)))


def _disk(rng, radius) -> complex:
    r = radius * np.sqrt(rng.uniform())
    return complex(r * np.exp(1j * rng.uniform(0, 2 * np.pi)))


def draw_characters(c: Carrier, names, psi_slot, rng) -> dict[str, Character]:
    out: dict[str, Character] = {}
    if isinstance(c, FiniteCarrier):
        pool = [ch for ch in enumerate_characters(c) if not ch.is_zero]
        if len(pool) < len(names):
            raise SamplingError(f"carrier has {len(pool)} nonzero characters, need {len(names)}")
        idx = rng.permutation(len(pool))[: len(names)]
        return {n: pool[i] for n, i in zip(names, idx)}
    used_one = False
    for n in names:
        for _ in range(200):
            if isinstance(c, RatAddCarrier):
                ch = analytic_character(c, [_disk(rng, RAT_EXP_RADIUS) for _ in range(c.dim)])
                far = all(np.linalg.norm(np.subtract(ch.params, o.params)) >= CHAR_SEPARATION for o in out.values())
            else:
                if n != psi_slot and not used_one and rng.uniform() < 0.25:
                    ch = analytic_character(c, form="one")
                    far = True
                else:
                    ch = analytic_character(c, _disk(rng, POWER_EXP_RADIUS))
                    far = all(o.form != "power" or abs(ch.params[0] - o.params[0]) >= CHAR_SEPARATION
                              for o in out.values())
            if far:
                out[n] = ch
                used_one = used_one or ch.form == "one"
                break
        else:
            raise SamplingError("could not draw separated characters")
    return out


def draw_additives(c: Carrier, names, rng) -> dict:
    if not names:
        return {}
    if isinstance(c, FiniteCarrier):
        raise SamplingError("additive dimension 0, A!=0 unsatisfiable on a finite carrier")
    return {n: analytic_additive(c, [annulus(rng) for _ in range(c.dim)]) for n in names}


def _well_posed(t, p: FamilyParams) -> str | None:
    """Reason a draw is too close to a degenerate surface, or None."""
    for k in t.scalars:
        if k in p.scalars:
            v = abs(p.scalars[k])
            if not (SCALAR_RANGE[0] <= v <= SCALAR_RANGE[1]):
                return f"scalar {k} has magnitude {v:.2e}"
    for c in t.constraints + t.adopted:
        if c.kind == "neq":
            _, rel = c.measure(p)
            if rel < DEGENERACY_MARGIN:
                return f"near {c.name}"
    return None


def sample_params(
    family_id: str,
    carrier: Carrier,
    lambda1: complex,
    lambda2: complex,
    seed: int,
    variant: str = "effective",
    max_attempts: int = MAX_ATTEMPTS,
) -> FamilyParams:
    """Draw free scalars from the annulus 0.3 <= |z| <= 3, solve constrained ones, re-draw degenerate draws."""
    t = get_template(family_id)
    if t.psi_slot and isinstance(carrier, FiniteCarrier):
        raise SamplingError("additive dimension 0, A!=0 unsatisfiable on a finite carrier")
    rng = family_rng(family_id, seed)
    last = "no attempt made"
    for _ in range(max_attempts):
        p = FamilyParams(lambda1=complex(lambda1), lambda2=complex(lambda2))
        p.characters = draw_characters(carrier, t.characters, t.psi_slot, rng)
        p.additives = draw_additives(carrier, t.additives, rng)
        for k in t.free:
            p.scalars[k] = annulus(rng)
        try:
            if t.solve_printed is not None:
                t.solve_printed(p, rng)
            if variant != "printed" and t.solve_adopted is not None:
                t.solve_adopted(p, rng)
            q = t.derive(p) if t.derive is not None else p
        except (DegenerateParameters, ZeroDivisionError) as e:
            last = str(e)
            continue
        bad = violations(validate_constraints(family_id, p, variant))
        if bad:
            last = bad[0].name
            continue
        why = _well_posed(t, q)
        if why:
            last = why
            continue
        try:
            inst = build_instance(family_id, p, variant, validate=False)
        except (DegenerateParameters, ZeroDivisionError) as e:
            last = str(e)
            continue
        if t.arity > 2:
            f, h = inst.components[0], inst.components[2]
            if not linear_independence(f, h, 1e-6):
                last = "f and h nearly dependent"
                continue
        return p
    raise SamplingError(f"{family_id}: no admissible draw after {max_attempts} attempts (last: {last})")


def hosting_carriers(family_id: str) -> list[Carrier]:
    """Carriers on which the family is instantiated by default."""
    t = get_template(family_id)
    hosts: list[Carrier] = [_RAT2, _NONNEG]
    if t.psi_slot is None:
        hosts.append(_Z5)
    return hosts


_RAT2 = rat_add(2)
_NONNEG = nonneg_real_mul()
_Z5 = zmod_add(5)

DEFAULT_LAMBDAS = {"p41": (0j, 0j), "p42": (0j, 0j), "t1": (0j, 1.0 + 0j), "t2": (0.8 + 0.3j, -0.6 + 0.9j)}


def seeded_lambdas(family_id: str, seed: int) -> tuple[complex, complex]:
    """Coupling constants for seeded suites: lambda2 (and lambda1 for t2) drawn from the annulus."""
    t = get_template(family_id)
    if t.group in ("p41", "p42"):
        return 0j, 0j
    rng = np.random.default_rng([int(seed), 7919])
    l2 = annulus(rng, 0.5, 2.0)
    l1 = annulus(rng, 0.5, 2.0) if t.group == "t2" else 0j
    return l1, l2


def sample_instance(family_id: str, seed: int, carrier: Carrier | None = None, variant: str = "effective"):
    """Seeded instance on the seed-selected hosting carrier (or the given one)."""
    if carrier is None:
        hosts = hosting_carriers(family_id)
        carrier = hosts[seed % len(hosts)]
    l1, l2 = seeded_lambdas(family_id, seed)
    p = sample_params(family_id, carrier, l1, l2, seed, variant)
    return build_instance(family_id, p, variant)
