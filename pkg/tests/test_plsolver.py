import pytest

from plquant.linsolve import CONST, solve_sparse
from plquant.errors import NoSolution
from plquant.plsolver import (check_classical_limit, check_jacobi, family_table,
                              homomorphism_defects, jacobi_defects)
from plquant.scalar import get_field

import reference as R


# -- sparse elimination -----------------------------------------------------------------

def test_solve_sparse_parametric():
    F = get_field(("z",))
    z = F.param("z")
    # x0 + x1 = z, x1 - x2 = 0
    rows = [{0: F(1), 1: F(1), CONST: -z}, {1: F(1), 2: F(-1)}]
    sol = solve_sparse(rows, [0, 1, 2], F)
    assert len(sol.free) == 1
    vals = sol.substitute({sol.free[0]: F(3)}, F)
    assert vals[0] + vals[1] == z and vals[1] == vals[2]


def test_solve_sparse_inconsistent():
    F = get_field(())
    with pytest.raises(NoSolution):
        solve_sparse([{0: F(1), CONST: F(-1)}, {0: F(2), CONST: F(-3)}], [0], F)


# -- sl2 Ansatz -------------------------------------------------------------------------

def test_sl2_system_size(sl2):
    assert sl2.solution.system.n_unknowns == 45
    assert sl2.solution.system.fset.size == 5


def test_sl2_family(sl2):
    sol = sl2.solution
    tabs = family_table(sol.system, sol.family)
    labels = {sol.system.label(w): t for w, t in tabs.items() if w != CONST}
    assert set(labels) == set(R.SL2_FAMILY)
    for lab, t in labels.items():
        assert not R.table_mismatches(t, R.table(sl2.deck.space, R.SL2_FAMILY[lab])), lab


def test_sl2_unique_solution(sl2):
    sol = sl2.solution
    for lab, value in R.SL2_BETA.items():
        i, j, k, l = map(int, lab.split("_")[1].split(","))
        expected = R.expr(sl2.deck.space, value).as_scalar()
        assert sol.beta[sol.system.var_of_label(i, j, k, l)] == expected, lab
    assert sol.effective_free == 0


def test_sl2_bracket(sl2):
    assert not R.table_mismatches(sl2.table, R.table(sl2.deck.space, R.SL2_BRACKET))


def test_sl2_bracket_checks(sl2):
    Q = sl2.table
    assert check_jacobi(Q)
    assert check_classical_limit(Q, sl2.bialgebra.algebra.c, sl2.deck.gen_of)
    assert not homomorphism_defects(Q, sl2.coproduct)


def test_broken_bracket_fails_checks(sl2):
    S = sl2.deck.space
    bad = R.table(S, {**R.SL2_BRACKET, ("Jp", "Jm"): "(1 - exp(-2*z*J3))/(2*z) + z*Jp*Jm"})
    assert homomorphism_defects(bad, sl2.coproduct)
    # cyclic sum is -J3
    skew = R.table(S, {("Jp", "Jm"): "J3", ("J3", "Jp"): "Jp", ("J3", "Jm"): "Jp"})
    assert jacobi_defects(skew)


def test_undeformed_bracket_is_linear(pipeline):
    p = pipeline("sl2_undeformed")
    expected = {("J3", "Jp"): "2*Jp", ("J3", "Jm"): "-2*Jm", ("Jp", "Jm"): "J3"}
    assert not R.table_mismatches(p.table, R.table(p.deck.space, expected))


def test_bracket_table_is_antisymmetric(sl2):
    Q = sl2.table
    n = Q.space.ncoords
    for i in range(n):
        for j in range(n):
            if i != j:
                assert Q.get(i, j) == -Q.get(j, i)


# -- so(2,2) -----------------------------------------------------------------------------

def test_so22_system_size(so22):
    assert so22.solution.system.n_unknowns == 2040


def test_so22_bracket_matches_consistent_table(so22):
    S = so22.deck.space
    assert not R.table_mismatches(so22.table, R.table(S, R.SO22_BRACKET_CORRECTED))


def test_so22_reference_row_breaks_homomorphism(so22):
    # the reference {N+, N-} row differs from the solved one and is not a Poisson-Lie bracket
    S = so22.deck.space
    ref = R.table(S, R.SO22_BRACKET)
    assert R.table_mismatches(so22.table, ref)
    assert homomorphism_defects(ref, so22.coproduct)


# -- kappa-Poincare ----------------------------------------------------------------------

@pytest.mark.slow
def test_kappa_bracket(kappa):
    sol = kappa.solution
    assert sol.system.n_unknowns == 11385
    space = kappa.deck.space
    assert set(sol.system.fset.functions) == {R.expr(space, f) for f in R.KAPPA_FUNCTION_SET}
    assert not R.table_mismatches(kappa.table, R.table(kappa.deck.space, R.kappa_bracket()))


@pytest.mark.slow
def test_twisted_bracket_equals_untwisted(twisted):
    assert twisted.solution.system.n_unknowns == 11385
    assert not R.table_mismatches(twisted.table, R.table(twisted.deck.space, R.kappa_bracket()))
