from __future__ import annotations

import numpy as np
import pytest

from cslab.carrier import FiniteCarrier, rat_add, zmod_add
from cslab.classify import (
    ClassificationError,
    canonical_params,
    classify_quadruple,
    fit_template,
    recover_characters,
    same_params,
)
from cslab.families import FAMILY_IDS, FamilyParams, build_instance, build_t1, get_template, sample_instance
from cslab.funcspace import ComplexFn, analytic_additive, analytic_character, enumerate_characters

SYSTEM_IDS = [fid for fid in FAMILY_IDS if len(get_template(fid).components) == 4]


@pytest.fixture(scope="module")
def t12():
    r = rat_add(1)
    p = FamilyParams(scalars={"alpha": 2}, characters={"mu": analytic_character(r, 1), "m": analytic_character(r, 2)},
                     additives={"A": analytic_additive(r, [1])}, lambda2=1)
    return build_t1("t1.2", p, 1)


def test_recover_characters_t1_2(t12):
    chars = recover_characters(t12.components, t12.carrier)
    bs = sorted(complex(np.ravel(ch.params)[0]).real for ch in chars)
    assert bs == pytest.approx([1.0, 2.0], abs=1e-6)


def test_round_trip_t1_2(t12):
    cl = classify_quadruple(t12.components, 0, 1)
    alphas = [p["alpha"] for m in cl.matches for f, p, _ in m.entries() if f == "t1.2"]
    assert alphas and abs(alphas[0] - 2) <= 1e-6


def test_all_matches_reported(t12):
    # t1.4 with d = -1/(alpha lambda2), c = alpha^2 lambda2^2 describes the same quadruple
    cl = classify_quadruple(t12.components, 0, 1)
    assert {"t1.2", "t1.4"} <= set(cl.family_ids())
    for m in cl.matches:
        for f, p, r in m.entries():
            assert r <= 1e-9
            assert build_instance(f, p, validate=False).residual().relative <= 1e-9


def test_finite_carrier_characters_are_exact():
    inst = sample_instance("t2.5.i", 2, carrier=zmod_add(5))
    chars = recover_characters(inst.components, inst.carrier)
    table = {tuple(np.round(np.asarray(c.params, complex), 12)) for c in enumerate_characters(inst.carrier)}
    for ch in chars:
        assert tuple(np.round(np.asarray(ch.params, complex), 12)) in table


def test_dependent_pair_is_rejected():
    z = ComplexFn.zero(rat_add(1))
    with pytest.raises(ClassificationError, match="linearly dependent"):
        classify_quadruple((z, z, z, z), 0, 1)


def test_non_solution_is_rejected():
    r = rat_add(1)
    one = ComplexFn.constant(r, 1)
    with pytest.raises(ClassificationError, match="not a solution"):
        classify_quadruple((one, one, one * 2, one), 0, 1)


@pytest.mark.parametrize("fid", SYSTEM_IDS)
def test_random_quadruple_fits_no_template(fid):
    r = rat_add(1)
    rng = np.random.default_rng(0)
    chars = [analytic_character(r, b) for b in (0.3, -0.5, 0.8)]
    comps = [sum((complex(*rng.normal(size=2)) * ch for ch in chars), ComplexFn.zero(r)) for _ in range(4)]
    _, res = fit_template(fid, comps, chars, 0.7, 1.1)
    assert res > 1e-2


def test_t1_6_overlaps_are_merged():
    inst = sample_instance("t1.6", 1)
    cl = classify_quadruple(inst.components, inst.params.lambda1, inst.params.lambda2)
    groups = [set(m.families) for m in cl.matches]
    assert any({"t1.6", "t1.7", "t1.8"} <= g for g in groups)


def test_t2_5_iii_recovers_printed_delta1():
    inst = sample_instance("t2.5.iii", 4)
    cl = classify_quadruple(inst.components, inst.params.lambda1, inst.params.lambda2)
    l1, l2 = inst.params.lambda1, inst.params.lambda2
    found = False
    for m in cl.matches:
        for f, p, _ in m.entries():
            if f != "t2.5.iii":
                continue
            c, d, g, lam = p["c"], p["d"], p["gamma"], p["lam"]
            assert abs(p["delta1"] - (4 * c * g * l2 - 1) / (2 * c * (2 - d) * lam)) <= 1e-6 * max(1, abs(p["delta1"]))
            found = found or same_params(f, p, inst.params)
    assert found


@pytest.mark.parametrize("fid", ["t1.1", "t1.5", "t2.2", "t2.4", "t2.5.vi", "p42.2", "p41.1"])
def test_canonicalization_is_idempotent(fid):
    inst = sample_instance(fid, 0)
    cl = classify_quadruple(inst.components, inst.params.lambda1, inst.params.lambda2)
    (p,) = [p for m in cl.matches for f, p, _ in m.entries() if f == fid][:1]
    rebuilt = build_instance(fid, p, validate=False)
    cl2 = classify_quadruple(rebuilt.components, rebuilt.params.lambda1, rebuilt.params.lambda2)
    (q,) = [q for m in cl2.matches for f, q, _ in m.entries() if f == fid][:1]
    assert same_params(fid, p, q, 1e-9)
    assert canonical_params(fid, canonical_params(fid, p)).scalars == pytest.approx(canonical_params(fid, p).scalars)


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_round_trip_few_seeds(fid):
    hits = 0
    for seed in range(3):
        inst = sample_instance(fid, seed)
        cl = classify_quadruple(inst.components, inst.params.lambda1, inst.params.lambda2)
        hits += any(f == fid and same_params(f, p, inst.params) for m in cl.matches for f, p, _ in m.entries())
    assert hits == 3


def test_sine_pair_on_finite_group():
    c = zmod_add(3)
    chars = [ch for ch in enumerate_characters(c) if not ch.is_zero]
    f = chars[1].as_function() - chars[2].as_function()
    g = (chars[1].as_function() + chars[2].as_function()) / 2
    cl = classify_quadruple((f, g))
    assert not cl.unmatched
    assert "p41.1" in cl.family_ids()


def test_semilattice_carrier_is_accepted():
    c = FiniteCarrier(("0", "1", "2"), ((0, 0, 0), (0, 1, 1), (0, 1, 2)))
    chars = [ch for ch in enumerate_characters(c) if not ch.is_zero]
    f = chars[0].as_function() - chars[1].as_function()
    g = (chars[0].as_function() + chars[1].as_function()) / 2
    cl = classify_quadruple((f, g))
    assert "p41.1" in cl.family_ids()
