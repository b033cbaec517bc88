from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cslab.carrier import (
    CarrierError,
    FiniteCarrier,
    associativity_witness,
    check_square_generated,
    iter_window_triples,
    load_carrier,
    mod2_mul,
    nonneg_real_mul,
    rat_add,
    singleton,
    zmod_add,
)


def test_singleton_loads():
    c = load_carrier({"kind": "finite", "elements": ["e"], "table": [["e"]]})
    assert c.size == 1
    assert c.compose(0, 0) == 0


def test_mod2_mul_is_associative_on_all_eight_triples():
    c = load_carrier({"kind": "finite", "elements": ["0", "1"], "table": [["0", "0"], ["0", "1"]]})
    triples = list(itertools.product(range(2), repeat=3))
    assert len(triples) == 8
    for x, y, z in triples:
        assert c.compose(c.compose(x, y), z) == c.compose(x, c.compose(y, z))


def test_non_associative_table_rejected_with_witness():
    # 0*0 = 1, everything else 0: (0*0)*1 = 0 but 0*(0*1) = 1
    table = ((1, 0), (0, 0))
    assert associativity_witness(table) is not None
    with pytest.raises(CarrierError, match="not associative"):
        load_carrier({"kind": "finite", "elements": ["0", "1"], "table": [["1", "0"], ["0", "0"]]})


def test_window_outside_carrier_rejected():
    with pytest.raises(CarrierError):
        load_carrier({"kind": "finite", "elements": ["0", "1"], "table": [["0", "0"], ["0", "1"]], "window": ["2"]})


def test_duplicate_window_rejected():
    with pytest.raises(CarrierError):
        load_carrier({"kind": "finite", "elements": ["0", "1"], "table": [["0", "0"], ["0", "1"]], "window": ["0", "0"]})


def test_unknown_kind_rejected():
    with pytest.raises(CarrierError):
        load_carrier({"kind": "torus"})


def test_square_generated_examples():
    assert check_square_generated(mod2_mul()).all_reachable
    z3 = check_square_generated(zmod_add(3))
    assert z3.all_reachable
    # 1 = 2+2 and 2 = 1+1 in Z/3
    assert z3.decompositions[1] == [2]
    assert z3.decompositions[2] == [1]
    z2 = check_square_generated(zmod_add(2))
    assert not z2.all_reachable
    assert z2.unreachable == [1]


@pytest.mark.parametrize("n", range(1, 13))
def test_zmod_square_generated_iff_odd(n):
    assert check_square_generated(zmod_add(n)).all_reachable == (n % 2 == 1)


def test_analytic_square_generation_is_builtin():
    for c in (rat_add(1), rat_add(2), nonneg_real_mul()):
        v = check_square_generated(c)
        assert v.builtin and v.all_reachable


def test_compose_examples():
    r = rat_add(1)
    assert r.compose((Fraction(1, 2),), (Fraction(1, 3),)) == (Fraction(5, 6),)
    assert nonneg_real_mul().compose(0.0, 7.5) == 0.0
    assert mod2_mul().compose(1, 0) == 0


def test_compose_outside_domain_rejected():
    with pytest.raises(CarrierError):
        mod2_mul().compose(2, 0)
    with pytest.raises(CarrierError):
        nonneg_real_mul().compose(-1.0, 2.0)


def test_default_analytic_window_size():
    assert len(rat_add(2).window) == 12
    assert len(nonneg_real_mul().window) == 12


@pytest.mark.parametrize("c", [singleton(), mod2_mul(), zmod_add(3), zmod_add(5), rat_add(1), rat_add(2), nonneg_real_mul()],
                         ids=["singleton", "mod2", "z3", "z5", "rat1", "rat2", "nonneg"])
def test_associative_on_window_triples(c):
    for x, y, z in iter_window_triples(c):
        left, right = c.compose(c.compose(x, y), z), c.compose(x, c.compose(y, z))
        if c.kind == "nonneg-real-mul":
            assert left == pytest.approx(right, rel=1e-15)
        else:
            assert left == right


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 50, allow_nan=False), min_size=2, max_size=2))
def test_nonneg_compose_stays_nonnegative(xy):
    assert nonneg_real_mul().compose(*xy) >= 0


@settings(max_examples=60, deadline=None)
@given(st.tuples(*[st.fractions(max_denominator=20) for _ in range(4)]))
def test_rat_add_is_exact_addition(v):
    c = rat_add(2)
    x, y = (v[0], v[1]), (v[2], v[3])
    assert c.compose(x, y) == (v[0] + v[2], v[1] + v[3])


def test_carrier_json_round_trip():
    for c in (mod2_mul(), rat_add(2), nonneg_real_mul()):
        d = load_carrier(c.to_json())
        assert d.to_json() == c.to_json()


def test_finite_carrier_direct_construction():
    c = FiniteCarrier(("a", "b"), ((0, 1), (1, 0)))
    assert c.elements == (0, 1)
