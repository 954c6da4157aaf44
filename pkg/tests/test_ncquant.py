import random

import pytest
from hypothesis import given, settings, strategies as st

from plquant.errors import AmbiguousOrdering
from plquant.ncquant import (check_quantum_coassoc, check_quantum_hom, drop_coproduct_term,
                             normal_order, perturb_relation, quantize, word_series)


@pytest.fixture(scope="module")
def sl2_q(sl2):
    Q, delta = sl2.primed
    return quantize(Q, delta, 4)


def test_sl2_relations(sl2_q):
    assert sl2_q.relation_lines() == [
        "[Jp', Jm'] = J3 + 1/6*z^2*J3^3 + 1/120*z^4*J3^5",
        "[Jp', J3] = -2*Jp'",
        "[Jm', J3] = 2*Jm'",
    ]


def test_sl2_checks_pass(sl2_q):
    assert check_quantum_hom(sl2_q).ok
    assert check_quantum_coassoc(sl2_q).ok


def test_order_zero_is_undeformed(sl2):
    Q, delta = sl2.primed
    P = quantize(Q, delta, 0)
    assert P.relation_lines() == ["[Jp', Jm'] = J3", "[Jp', J3] = -2*Jp'", "[Jm', J3] = 2*Jm'"]
    assert all(" (x) 1 + " in line or "1 (x)" in line for line in P.coproduct_lines())
    assert check_quantum_hom(P).ok and check_quantum_coassoc(P).ok


def test_normal_order_single_rewrite(sl2):
    Q, delta = sl2.primed
    P = quantize(Q, delta, 2)
    out = normal_order(word_series(P, "Jm'", "Jp'"), P)
    assert out.format(P.names, P.space.params) == "Jp'*Jm' - J3 - 1/6*z^2*J3^3"
    out = normal_order(word_series(P, "J3", "Jp'"), P)
    assert out.format(P.names, P.space.params) == "2*Jp' + Jp'*J3"


def test_ordered_word_is_unchanged(sl2_q):
    w = word_series(sl2_q, "Jp'", "Jm'", "J3")
    assert normal_order(w, sl2_q).terms == w


@pytest.mark.parametrize("name", ["Jp'", "Jm'"])
def test_dropped_coproduct_term_fails_early(sl2_q, name):
    bad = drop_coproduct_term(sl2_q, name)
    first = check_quantum_hom(bad).first_failure
    assert first is not None and first <= 1
    assert check_quantum_coassoc(bad).first_failure is not None


def test_perturbed_relation_fails_at_its_order(sl2_q):
    J3 = sl2_q.space.index["J3"]
    bad = perturb_relation(sl2_q, 0, 1, (J3, J3))
    assert check_quantum_hom(bad).first_failure == 4


def test_primitive_perturbation_stays_consistent(sl2_q):
    # adding z^N times a primitive element is itself a consistent deformation
    J3 = sl2_q.space.index["J3"]
    assert check_quantum_hom(perturb_relation(sl2_q, 0, 1, (J3,))).ok


def test_so22_quantization(so22):
    Q, delta = so22.primed
    P = quantize(Q, delta, 4)
    assert check_quantum_hom(P).ok
    assert check_quantum_coassoc(P).ok


def test_ambiguous_products_are_refused(so22):
    # the original so(2,2) coordinates mix non-commuting factors in one product
    with pytest.raises(AmbiguousOrdering):
        quantize(so22.table, so22.coproduct, 2)


@pytest.fixture(scope="module")
def so22_q(so22):
    Q, delta = so22.primed
    return quantize(Q, delta, 2)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=2, max_size=4), st.integers(0, 10 ** 6))
def test_normal_order_is_confluent(so22_q, word, seed):
    names = [so22_q.names[k] for k in so22_q.alphabet]
    w = word_series(so22_q, *[names[i] for i in word])
    fixed = normal_order(w, so22_q)
    assert normal_order(w, so22_q, random.Random(seed)).terms == fixed.terms


@pytest.mark.slow
@pytest.mark.parametrize("fixture", ["kappa", "twisted"])
def test_kappa_quantization(request, fixture):
    p = request.getfixturevalue(fixture)
    Q, delta = p.primed
    P = quantize(Q, delta, 3)
    assert check_quantum_hom(P).ok
    assert check_quantum_coassoc(P).ok
