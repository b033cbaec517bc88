from __future__ import annotations

import itertools

import numpy as np
import pytest
import sympy as sp

from cslab.carrier import rat_add, zmod_add
from cslab.funcspace import analytic_additive, analytic_character, linear_independence
from cslab.families import (
    FAMILY_IDS,
    ConstraintViolation,
    FamilyParams,
    SamplingError,
    TemplateError,
    build_p41,
    build_p42,
    build_t1,
    build_t2,
    component_residual,
    get_template,
    sample_instance,
    sample_params,
    validate_constraints,
)
from cslab.families.build import violations
from cslab.families.catalog import T25_SLOTS, delta_transform, t25_derived

# real root of delta^3 - delta^2 + 1, frozen from numpy.roots
T23_DELTA = -0.7548776662466927


@pytest.fixture(scope="module")
def r1():
    return rat_add(1)


def _x(c, b):
    return analytic_character(c, b)


def test_family_count():
    groups = {g: sum(get_template(f).group == g for f in FAMILY_IDS) for g in ("p41", "p42", "t1", "t2")}
    assert groups == {"p41": 2, "p42": 4, "t1": 8, "t2": 10}
    assert len(FAMILY_IDS) == 24


def test_p41_difference_of_characters(r1):
    p = FamilyParams(scalars={"alpha": 1}, characters={"chi1": _x(r1, 0), "chi2": _x(r1, 1)})
    f, g = build_p41("p41.1", p)
    pts = r1.encode(r1.window)
    e = np.exp([float(x[0]) for x in r1.window])
    assert np.allclose(f.evaluate(pts), 1 - e, atol=1e-12)
    assert np.allclose(g.evaluate(pts), (1 + e) / 2, atol=1e-12)
    assert component_residual((f, g)).relative <= 1e-12


def test_p41_psi_on_nonneg_reals():
    from cslab.carrier import nonneg_real_mul

    c = nonneg_real_mul()
    p = FamilyParams(characters={"chi": analytic_character(c, 1)}, additives={"A": analytic_additive(c, 1)})
    f, g = build_p41("p41.2", p)
    assert f(0.0) == 0
    assert component_residual((f, g)).relative <= 1e-9


def test_p41_equal_characters_rejected(r1):
    p = FamilyParams(scalars={"alpha": 1}, characters={"chi1": _x(r1, 1), "chi2": _x(r1, 1)})
    with pytest.raises(ConstraintViolation):
        build_p41("p41.1", p)


def test_p42_1_base_triple():
    c = rat_add(2)
    chi = _x(c, [0.2, -0.1])
    p = FamilyParams(scalars={"delta": 0}, characters={"chi": chi},
                     additives={"A": analytic_additive(c, [1, 0]), "A1": analytic_additive(c, [0, 1])})
    assert component_residual(build_p42("p42.1", p, 0)).relative <= 1e-12


def test_p42_3_with_c_d_one(r1):
    p = FamilyParams(scalars={"c": 1, "d": 1, "delta": 0.3},
                     characters={"mu": _x(r1, 0.5), "chi": _x(r1, -0.4)}, additives={"A": analytic_additive(r1, [1])})
    assert component_residual(build_p42("p42.3", p, 0.3)).relative <= 1e-12


def test_p42_3_constraint_is_necessary(r1):
    p = FamilyParams(scalars={"c": 1, "d": 2, "delta": 0},
                     characters={"mu": _x(r1, 0.5), "chi": _x(r1, -0.4)}, additives={"A": analytic_additive(r1, [1])})
    t = get_template("p42.3")
    comps = t.printed(p)
    rep = component_residual(comps)
    assert rep.max_abs > 0.01 * max(f.max_abs() for f in comps)


def test_p42_4_alpha_beta_one(r1):
    p = FamilyParams(scalars={"alpha": 1, "beta": 1, "c": 0.5, "delta": -0.2},
                     characters={"chi1": _x(r1, 0), "chi2": _x(r1, 1), "chi3": _x(r1, 2)})
    assert component_residual(build_p42("p42.4", p, -0.2)).relative <= 1e-12


@pytest.mark.parametrize("fid", ["p42.1", "p42.2", "p42.3", "p42.4"])
def test_delta_transform_of_base_triple(fid):
    p = sample_instance(fid, 0).params
    base = build_p42(fid, p.with_scalars(delta=0), 0)
    moved = build_p42(fid, p, p["delta"])
    pts = base[0].carrier.encode(base[0].carrier.window)
    for a, b in zip(delta_transform(*base, 0), base):
        assert np.array_equal(a.evaluate(pts), b.evaluate(pts))
    for a, b in zip(delta_transform(*base, p["delta"]), moved):
        assert np.allclose(a.evaluate(pts), b.evaluate(pts), rtol=1e-12, atol=1e-12)


def test_t1_6_example(r1):
    p = FamilyParams(scalars={"c": 0.5, "beta": 1, "lam": 1},
                     characters={"chi1": _x(r1, 0), "chi2": _x(r1, 1), "chi3": _x(r1, 2)}, lambda2=1)
    assert all(c.satisfied for c in validate_constraints("t1.6", p))
    inst = build_t1("t1.6", p, 1)
    rep = inst.residual()
    assert rep.r1 <= 1e-9 and rep.r2 <= 1e-9
    assert rep.independent


def test_t1_1_example():
    c = rat_add(2)
    p = FamilyParams(characters={"m": _x(c, [1, 0])},
                     additives={"A": analytic_additive(c, [1, 0]), "A1": analytic_additive(c, [0, 1])}, lambda2=1)
    assert build_t1("t1.1", p, 1).residual().relative <= 1e-9


def test_t1_5_rejects_wrong_cd(r1):
    p = FamilyParams(scalars={"c": 1, "d": 2}, characters={"mu": _x(r1, 0.5), "m": _x(r1, -0.3)},
                     additives={"A": analytic_additive(r1, [1])}, lambda2=1)
    with pytest.raises(ConstraintViolation, match="1-c\\*d\\^2"):
        build_t1("t1.5", p, 1)


def test_t2_3_cubic_root_example(r1):
    roots = np.roots([1, -1, 0, 1])
    real = roots[np.abs(roots.imag) < 1e-12].real
    assert real[0] == pytest.approx(T23_DELTA, abs=1e-12)
    p = FamilyParams(scalars={"c": 1, "delta": T23_DELTA}, characters={"mu": _x(r1, 0.5), "chi": _x(r1, -0.3)},
                     additives={"A": analytic_additive(r1, [1])}, lambda1=1, lambda2=1)
    assert build_t2("t2.3", p, 1, 1).residual().relative <= 1e-9


def test_t2_5_i_degenerate_gamma(r1):
    assert t25_derived("i", 0.5, 1, 1, 1, 1, 1) == (1.0, 1.0, -0.5, 0.0)
    p = FamilyParams(scalars={"c": 0.5, "d": 1, "lam": 1, "gamma": 1},
                     characters={"chi1": _x(r1, 0), "chi2": _x(r1, 1), "chi3": _x(r1, 2)}, lambda1=1, lambda2=1)
    bad = {c.name for c in violations(validate_constraints("t2.5.i", p))}
    assert "beta!=0" in bad
    with pytest.raises(ConstraintViolation):
        build_t2("t2.5.i", p, 1, 1)


def test_t2_2_denominator_violation(r1):
    p = FamilyParams(scalars={"delta1": 1, "delta2": -1}, characters={"mu": _x(r1, 0.5), "chi": _x(r1, -0.3)},
                     additives={"A": analytic_additive(r1, [1])}, lambda1=1, lambda2=1)
    bad = {c.name for c in violations(validate_constraints("t2.2", p))}
    assert "lambda2*delta2+delta1^2!=0" in bad


def test_t2_4_d_equals_delta_violation(r1):
    p = FamilyParams(scalars={"c": 0.25, "d": 2, "delta": 2}, characters={"mu": _x(r1, 0.5), "chi": _x(r1, -0.3)},
                     additives={"A": analytic_additive(r1, [1])}, lambda1=1, lambda2=1)
    bad = {c.name for c in violations(validate_constraints("t2.4", p))}
    assert "d!=delta" in bad


def test_sampler_is_deterministic():
    a, b = sample_instance("t1.6", 42), sample_instance("t1.6", 42)
    assert a.params.scalars == b.params.scalars
    assert all(c.satisfied for c in validate_constraints("t1.6", a.params))


def test_t2_3_sampled_delta_is_a_cubic_root():
    inst = sample_instance("t2.3", 7, carrier=rat_add(1))
    p = inst.params
    c, l1, l2 = p["c"], p.lambda1, p.lambda2
    roots = np.roots([c, -1, 0, c * l1 * l2**2])
    assert np.min(np.abs(roots - p["delta"])) <= 1e-12


def test_sampler_rejects_additive_family_on_finite_group():
    with pytest.raises(SamplingError, match="additive dimension 0"):
        sample_params("t1.1", zmod_add(3), 0, 1, 0)


def test_unknown_family():
    with pytest.raises(TemplateError):
        get_template("t9.9")


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_seeded_instances_verify(fid):
    for seed in range(10):
        inst = sample_instance(fid, seed)
        assert inst.residual().relative <= 1e-9
        if len(inst.components) >= 3:
            assert linear_independence(inst.components[0], inst.components[2])


def test_t2_5_subvariants_are_distinct(r1):
    chars = {"chi1": _x(r1, 0), "chi2": _x(r1, 0.6), "chi3": _x(r1, -0.5)}
    base = {"c": 0.3, "d": 0.7, "lam": 1.1, "gamma": 0.9}
    values = {}
    for v in T25_SLOTS:
        d1, d2, a, b = t25_derived(v, base["c"], base["d"], base["gamma"], base["lam"], 1.0, 1.0)
        p = FamilyParams(scalars={**base, "delta1": d1, "delta2": d2, "alpha": a, "beta": b},
                         characters=chars, lambda1=1.0, lambda2=1.0)
        comps = get_template(f"t2.5.{v}").build(p, "effective")
        pts = r1.encode(r1.window)
        values[v] = np.concatenate([f.evaluate(pts) for f in comps])
    for u, w in itertools.combinations(values, 2):
        assert np.max(np.abs(values[u] - values[w])) > 1e-6, (u, w)


# ---------------------------------------------------------------- symbolic oracle
# Printed formulas are transcribed independently of the catalog and checked as
# polynomial identities in the (algebraically independent) character values.


def _sym_chars(n):
    xs = sp.symbols(f"x1:{n + 1}")
    ys = sp.symbols(f"y1:{n + 1}")
    return xs, ys, [a * b for a, b in zip(xs, ys)]


def _eq(F, G, H, coupling):
    """F(xy) - F(x)G(y) - G(x)F(y) - coupling H(x)H(y) with each function as a map of point index."""
    return sp.expand(F(2) - F(0) * G(1) - G(0) * F(1) - coupling * H(0) * H(1))


def test_symbolic_t1_6():
    beta, lam, l2 = sp.symbols("beta lam lambda2", nonzero=True)
    c = 1 / (2 * lam**2 * beta * (2 - beta))
    xs, ys, xys = _sym_chars(3)
    pts = [xs, ys, xys]

    def f(k):
        x1, x2, _ = pts[k]
        return (x1 - x2) / (2 * lam * l2)

    def g1(k):
        x1, x2, _ = pts[k]
        return (x1 + x2) / 2

    def h(k):
        x1, x2, x3 = pts[k]
        return c * beta * x1 + c * (2 - beta) * x2 - 2 * c * x3

    def g2(k):
        x1, x2, x3 = pts[k]
        return (beta * x1 + (2 - beta) * x2 + 2 * x3) / 4

    assert sp.simplify(_eq(f, g1, h, 0)) == 0
    assert sp.simplify(_eq(h, g2, f, l2**2)) == 0


def test_symbolic_p42_3_constraint():
    d, delta = sp.symbols("d delta", nonzero=True)
    c = 1 / d**2
    mx, my, cx, cy, ax, ay = sp.symbols("mx my cx cy ax ay")
    mu = [mx, my, mx * my]
    ch = [cx, cy, cx * cy]
    a = [ax, ay, ax + ay]

    def psi(k):
        return ch[k] * a[k]

    def F0(k):
        return c * (mu[k] - ch[k]) + c * d * psi(k)

    def G0(k):
        return (mu[k] + ch[k]) / 2 - d * psi(k) / 2

    def H0(k):
        return psi(k)

    def f(k):
        return F0(k)

    def g(k):
        return -delta**2 * F0(k) / 2 + G0(k) + delta * H0(k)

    def h(k):
        return -delta * F0(k) + H0(k)

    assert sp.simplify(_eq(f, g, h, 1)) == 0


def test_symbolic_matches_catalog_t1_6(r1):
    """The catalog's numeric t1.6 agrees with the symbolic transcription at window points."""
    p = FamilyParams(scalars={"c": 1 / 6, "beta": 1.5, "lam": 2.0},
                     characters={"chi1": _x(r1, 0.1), "chi2": _x(r1, -0.2), "chi3": _x(r1, 0.3)}, lambda2=0.7)
    f, g1, h, g2 = build_t1("t1.6", p, 0.7).components
    for x in r1.window[:5]:
        e = [np.exp(b * float(x[0])) for b in (0.1, -0.2, 0.3)]
        assert f(x) == pytest.approx((e[0] - e[1]) / (2 * 2.0 * 0.7))
        assert g2(x) == pytest.approx((1.5 * e[0] + 0.5 * e[1] + 2 * e[2]) / 4)
