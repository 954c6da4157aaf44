import pytest

from plquant.plsolver import check_jacobi, homomorphism_defects
from plquant.transform import check_flip_symmetry, is_ambiguity_free, transport_bracket

import reference as R


def _co_mismatch(delta, table, space):
    return {k for k, v in table.items() if delta[k] != R.tensor_sum(space, v)}


def test_change_round_trip(sl2, so22):
    for p in (sl2, so22):
        assert not p.change.round_trip_defects()


def test_sl2_primed(sl2):
    Q, delta = sl2.primed
    P = Q.space
    assert not R.table_mismatches(Q, R.table(P, R.SL2_PRIMED_BRACKET))
    assert not _co_mismatch(delta, R.SL2_PRIMED_COPRODUCT, P)


def test_transport_back_recovers_bracket(sl2):
    Q, _ = sl2.primed
    assert transport_bracket(Q, sl2.change.inverted()) == sl2.table


def test_sl2_flip_symmetry(sl2):
    assert all(sl2.symmetry().values())
    flags = sl2.unprimed_symmetry()
    assert flags["J3"] and not flags["Jp"]


def test_sl2_primed_is_ambiguity_free(sl2):
    Q, delta = sl2.primed
    assert is_ambiguity_free(Q, delta)


def test_so22_primed_coproduct(so22):
    Q, delta = so22.primed
    assert not _co_mismatch(delta, R.SO22_PRIMED_COPRODUCT, Q.space)
    assert all(so22.symmetry().values())


def test_so22_primed_bracket(so22):
    Q, delta = so22.primed
    P = Q.space
    assert not R.table_mismatches(Q, R.table(P, R.SO22_PRIMED_BRACKET_CORRECTED))
    ref = R.table(P, R.SO22_PRIMED_BRACKET)
    assert R.table_mismatches(Q, ref) and homomorphism_defects(ref, delta)


@pytest.mark.slow
def test_kappa_primed(kappa):
    Q, delta = kappa.primed
    P = Q.space
    assert not R.table_mismatches(Q, R.table(P, R.kappa_primed_bracket()))
    assert not _co_mismatch(delta, R.kappa_primed_coproduct(), P)
    assert all(kappa.symmetry().values())
    assert check_jacobi(Q)


@pytest.mark.slow
def test_twisted_symmetry_at_zero_twist(twisted):
    assert all(twisted.symmetry(specialize={"eta": "0"}).values())
    literal = twisted.symmetry()
    assert literal["P0"] and not all(literal.values())


def test_flip_symmetry_detects_asymmetric_coproduct(sl2):
    assert not all(check_flip_symmetry(sl2.coproduct, ["z"]).values())
