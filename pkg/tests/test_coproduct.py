import pytest

from plquant.coproduct import antipode_defects, derive_antipode
from plquant.errors import NonGroupLikeLog
from plquant.parse import parse_expr

import reference as R


def _matches(delta, table, space):
    return {k for k, v in table.items() if delta[k] != R.tensor_sum(space, v)}


def test_sl2_coproduct(sl2):
    assert not _matches(sl2.coproduct, R.SL2_COPRODUCT, sl2.deck.space)


def test_sl2_axioms(sl2):
    d = sl2.coproduct
    assert all(d.check_coassociativity().values())
    assert all(d.check_counit().values())
    assert d.primitive_flags() == {"Jp": False, "Jm": False, "J3": True}


def test_sl2_antipode(sl2):
    S = derive_antipode(sl2.group_element, sl2.recipes)
    assert S["Jp"] == parse_expr("-exp(z*J3)*Jp", sl2.deck.space)
    assert not any(not e.is_zero() for e in antipode_defects(sl2.coproduct, S).values())


def test_so22_coproduct(so22):
    assert not _matches(so22.coproduct, R.SO22_COPRODUCT, so22.deck.space)
    assert all(so22.coproduct.check_coassociativity().values())


def test_undeformed_coproduct_is_primitive(pipeline):
    p = pipeline("sl2_undeformed")
    assert all(p.coproduct.primitive_flags().values())


def test_book_dual_group_has_no_closed_form_coproduct(book):
    assert book.coproduct_or_none is None
    with pytest.raises(NonGroupLikeLog):
        book.coproduct


def test_jordanian_coproduct_axioms(jordanian):
    d = jordanian.coproduct
    assert all(d.check_coassociativity().values())
    assert all(d.check_counit().values())


@pytest.mark.slow
def test_kappa_coproduct(kappa):
    assert not _matches(kappa.coproduct, R.kappa_coproduct(), kappa.deck.space)
    assert kappa.antipode_ok()


@pytest.mark.slow
def test_twisted_coproduct(twisted):
    assert not _matches(twisted.coproduct, R.twisted_coproduct(), twisted.deck.space)
    assert all(twisted.coproduct.check_coassociativity().values())


@pytest.mark.slow
def test_twisted_reduces_to_untwisted(twisted):
    F = twisted.deck.field
    flat = twisted.coproduct.substitute_params({"eta": F(0)})
    assert not _matches(flat, R.kappa_coproduct(), twisted.deck.space)
