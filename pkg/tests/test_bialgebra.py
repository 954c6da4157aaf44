import pytest

from plquant.bialgebra import (coboundary_solve, cocommutator_from_r, dualize, format_table,
                               make_bialgebra, r_matrix, validate)
from plquant.deck import resolve_deck
from plquant.scalar import get_field

from reference import SL2_DUAL_LINES


def sl2_standard():
    return resolve_deck("sl2_standard").bialgebra()


def test_shipped_decks_validate():
    for name in ("sl2_standard", "so22_drinfeld_jimbo", "kappa_poincare", "kappa_poincare_twisted",
                 "book_via_sklyanin", "jordanian_cross_method", "sl2_undeformed"):
        assert validate(resolve_deck(name).bialgebra()).ok, name


def test_broken_cocycle_is_reported():
    F = get_field(("z",))
    # sl2 bracket with a cocommutator that is not a cocycle
    b = make_bialgebra(["h", "e", "f"], F,
                       {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}},
                       {1: {(0, 2): F.param("z")}})
    rep = validate(b)
    assert not rep.ok
    assert rep.lines()


def test_dual_of_sl2_standard():
    assert format_table(dualize(sl2_standard())) == SL2_DUAL_LINES


def test_dualize_twice_is_identity():
    b = sl2_standard()
    bb = dualize(dualize(b), b.names)
    assert bb.algebra.c == b.algebra.c
    assert bb.cocommutator.f == b.cocommutator.f


def test_sl2_primal_is_coboundary():
    b = sl2_standard()
    res = coboundary_solve(b)
    assert res.is_coboundary
    assert cocommutator_from_r(b.algebra, res.r).f == b.cocommutator.f


@pytest.mark.parametrize("deck", ["sl2_standard", "so22_drinfeld_jimbo", "kappa_poincare"])
def test_dual_is_not_coboundary(deck):
    b = resolve_deck(deck).bialgebra()
    assert not coboundary_solve(dualize(b)).is_coboundary


def test_r_matrix_generates_cocommutator():
    b = sl2_standard()
    F = b.field
    # generators are j3, jp, jm; r = z/2 jp ^ jm reproduces the standard cocommutator up to scale
    r = r_matrix(F, 3, {(1, 2): F.param("z")})
    f = cocommutator_from_r(b.algebra, r).f
    assert any(not x.is_zero() for row in f for col in row for x in col)
