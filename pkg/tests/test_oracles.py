from __future__ import annotations

import numpy as np
import pytest

from cslab.carrier import mod2_mul, nonneg_real_mul, rat_add
from cslab.funcspace import ComplexFn, analytic_additive, analytic_character, psi_extend
from cslab.oracles import (
    CORPUS,
    TOL,
    OracleError,
    Prop33Input,
    falsify_lemma32,
    falsify_prop33,
    is_ideal,
    is_subsemigroup,
    oracle_lemma31,
    oracle_lemma32,
    oracle_prop33,
    oracle_prop34,
    run_suite,
    subset_all,
    subset_elements,
    subset_from_json,
)
from cslab.oracles import _conclude

# frozen verdicts of the constructed corpus
EXPECTED = {
    "lemma31": ["not-applicable", "holds", "not-applicable", "holds", "not-applicable", "holds",
                "holds", "holds", "holds", "holds"],
    "lemma32": ["holds", "not-applicable", "holds", "holds"],
    "prop33": ["holds", "holds", "holds", "not-applicable", "holds", "not-applicable", "holds", "not-applicable",
               "holds", "not-applicable", "holds", "holds", "holds", "holds", "not-applicable", "holds", "holds"],
    "prop34": ["holds", "not-applicable", "holds", "not-applicable", "holds", "holds", "not-applicable"],
}


@pytest.mark.parametrize("suite", sorted(CORPUS))
def test_corpus_verdicts(suite):
    got = [v.status for _, v in CORPUS[suite]()]
    assert got == EXPECTED[suite]


def test_corpus_size():
    assert sum(len(f()) for f in CORPUS.values()) >= 20


def test_not_applicable_reports_hypothesis_residual():
    for suite in CORPUS.values():
        for _, v in suite():
            if v.status == "not-applicable" and v.hypothesis_residual is not None:
                assert v.hypothesis_residual > TOL


def test_lemma31_examples():
    nn = nonneg_real_mul()
    pos = subset_from_json(nn, {"kind": "positive"})
    zero = subset_elements(nn, [0.0])
    assert oracle_lemma31(nn, pos, zero, analytic_additive(nn, [1.0])).status == "not-applicable"
    assert oracle_lemma31(nn, subset_all(), zero, ComplexFn.zero(nn)).status == "holds"
    m2 = mod2_mul()
    assert oracle_lemma31(m2, subset_all(), subset_elements(m2, ["0"]), ComplexFn.zero(m2)).status == "holds"


def test_subset_predicates():
    m2 = mod2_mul()
    assert is_ideal(m2, subset_elements(m2, ["0"]))[0]
    assert not is_ideal(m2, subset_elements(m2, ["1"]))[0]
    assert is_subsemigroup(m2, subset_elements(m2, ["1"]))[0]


def test_lemma32_examples():
    r1 = rat_add(1)
    e1, e2 = analytic_character(r1, [1.0]), analytic_character(r1, [2.0])
    assert oracle_lemma32([e1], [analytic_additive(r1, [0.0])], [0.0], [e2]).status == "holds"
    v = oracle_lemma32([e1], [analytic_additive(r1, [1.0])], [1.0], [e1])
    assert v.status == "not-applicable"
    assert v.hypothesis_residual > TOL


def test_prop33_part1_psi_injective():
    nn = nonneg_real_mul()
    idc = analytic_character(nn, 1.0)
    v = oracle_prop33(1, Prop33Input(mu=idc, phi1=analytic_additive(nn, [0.0]), phi2=analytic_additive(nn, [1.0])))
    assert v.status == "holds"


def test_prop33_part7_sign_branches():
    r2 = rat_add(2)
    e = analytic_character(r2, [1.0, 0.0])
    x1, x2 = analytic_additive(r2, [1.0, 0.0]), analytic_additive(r2, [0.0, 1.0])
    assert oracle_prop33(7, Prop33Input(mu=e, mu1=e, A=x2, A1=x1, a=x2, a1=x1)).status == "holds"
    assert oracle_prop33(7, Prop33Input(mu=e, mu1=e, A=x2, A1=x1, a=-x2, a1=x1)).status == "holds"


def test_prop34_examples():
    r2 = rat_add(2)
    chi = analytic_character(r2, [0.3, -0.2])
    f1 = psi_extend(chi, analytic_additive(r2, [1.0, 0.0]))
    f2 = psi_extend(chi, analytic_additive(r2, [0.0, 1.0]))
    assert oracle_prop34(1, f1=f1, f2=f2, g=chi.as_function(), scalar=3.0).status == "holds"
    assert oracle_prop34(2, f=f1, g=chi.as_function(), h=chi.as_function()).status == "holds"
    nn = nonneg_real_mul()
    idc, ln = analytic_character(nn, 1.0), analytic_additive(nn, [1.0])
    assert oracle_prop34(3, chi=idc, mu=idc, a=ln, A=ln).status == "holds"


def test_bad_part_rejected():
    with pytest.raises(OracleError):
        oracle_prop34(4)
    with pytest.raises(OracleError):
        oracle_prop33(8, Prop33Input())


def test_failed_conclusion_is_a_counterexample():
    v = _conclude("probe", 10, 0.0, 1e-3, lambda: {"witness": 1})
    assert v.status == "counterexample"
    assert v.counterexample == {"witness": 1}
    assert _conclude("probe", 10, 0.0, 1e-12, lambda: {}).status == "holds"


@pytest.mark.parametrize("falsify", [falsify_lemma32, falsify_prop33])
def test_falsification_is_deterministic_and_clean(falsify):
    a, b = falsify(300, 5), falsify(300, 5)
    assert a.to_json() == b.to_json()
    assert a.holds
    assert a.draws == 300
    assert a.hypothesis_pass + a.not_applicable == a.draws


def test_run_suite_unknown():
    with pytest.raises(OracleError):
        run_suite("lemma99")


def test_run_suite_json():
    (rep,) = run_suite("prop34", draws=0)
    d = rep.to_json()
    assert d["holds"] and d["falsification"] is None
    assert all(np.isfinite(i["checked_count"]) for i in d["instances"])
