"""Ansatz under infinitesimal multiplicativity, and its agreement with the other routes."""

import reference as R


BOOK_SKLYANIN = {("Jp", "Jm"): "-2*z*Jp*Jm", ("Jp", "J3"): "z*Jp", ("Jm", "J3"): "z*Jm"}


def test_book_sklyanin_bracket(book):
    assert not R.table_mismatches(book.sklyanin_table, R.table(book.deck.space, BOOK_SKLYANIN))


def test_book_infinitesimal_ansatz_equals_sklyanin(book):
    sol = book.infinitesimal_solution
    assert sol.effective_free == 0
    assert sol.table == book.sklyanin_table


def test_book_bracket_is_multiplicative(book):
    assert not book.multiplicativity_defects(book.table)


def test_wrong_bracket_is_not_multiplicative(book):
    S = book.deck.space
    wrong = R.table(S, {**BOOK_SKLYANIN, ("Jp", "Jm"): "-z*Jp*Jm"})
    assert book.multiplicativity_defects(wrong)


def test_sl2_routes_agree(sl2):
    assert sl2.infinitesimal_solution.table == sl2.solution.table
    assert not sl2.multiplicativity_defects(sl2.table)


def test_jordanian_cross_method(jordanian):
    skl, sol, _ = jordanian.cross_method()
    assert skl == sol.table
    expected = {("B", "A"): "z - z*exp(A)"}
    assert not R.table_mismatches(skl, R.table(jordanian.deck.space, expected))


def test_undeformed_routes_agree(pipeline):
    p = pipeline("sl2_undeformed")
    assert p.infinitesimal_solution.table == p.table
