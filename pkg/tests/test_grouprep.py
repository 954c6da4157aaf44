import pytest

from plquant.bialgebra import make_bialgebra
from plquant.errors import NonClosedFormSpectrum, NotFaithful, RepresentationError
from plquant.expr import get_space
from plquant.grouprep import (adjoint_rep, expr_mat_mul, make_representation, matrix_exp,
                              minimal_polynomial, spectrum)
from plquant.parse import parse_expr
from plquant.recipes import verify_recipe
from plquant.scalar import get_field

from reference import SL2_GROUP

F = get_field(("z",))
S = get_space(("z",), ("X",))


def M(rows):
    return [[F(x) for x in r] for r in rows]


def E(text):
    return parse_expr(text, S)


def test_exp_of_nilpotent_is_polynomial():
    out = matrix_exp(M([[0, 1], [0, 0]]), 0, S)
    assert out == [[S.one(), E("X")], [S.zero(), S.one()]]


def test_exp_of_diagonal():
    z = F.param("z")
    out = matrix_exp([[-z, F(0)], [F(0), F(0)]], 0, S)
    assert out[0][0] == E("exp(-z*X)") and out[1][1] == S.one()


def test_exp_of_rotation_uses_cos_and_sin():
    out = matrix_exp(M([[0, -1], [1, 0]]), 0, S)
    assert out == [[E("cos(X)"), E("-sin(X)")], [E("sin(X)"), E("cos(X)")]]


def test_exp_times_inverse_is_identity():
    A = M([[1, 1, 0], [0, 1, 0], [0, 0, -2]])
    P = matrix_exp(A, 0, S)
    Q = matrix_exp([[-x for x in r] for r in A], 0, S)
    prod = expr_mat_mul(P, Q, S)
    assert prod == [[S.one() if i == j else S.zero() for j in range(3)] for i in range(3)]


def test_minimal_polynomial_and_spectrum():
    A = M([[2, 1], [0, 2]])
    assert minimal_polynomial(A, F) == [F(4), F(-4), F(1)]
    assert spectrum(A, F) == [(F(2), 2)]


def test_irrational_spectrum_is_rejected():
    with pytest.raises(NonClosedFormSpectrum):
        matrix_exp(M([[0, 2], [1, 0]]), 0, S)


def test_adjoint_of_abelian_algebra_is_not_faithful():
    ab = make_bialgebra(["a", "b"], F, {}, {})
    with pytest.raises(NotFaithful):
        adjoint_rep(ab.algebra)


def test_adjoint_of_sl2_is_faithful():
    sl2 = make_bialgebra(["h", "e", "f"], F, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, {})
    assert adjoint_rep(sl2.algebra).faithful


def test_representation_must_respect_brackets():
    sl2 = make_bialgebra(["h", "e", "f"], F, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, {})
    good = {"h": M([[1, 0], [0, -1]]), "e": M([[0, 1], [0, 0]]), "f": M([[0, 0], [1, 0]])}
    assert make_representation(sl2.algebra, good).dim == 2
    bad = dict(good, f=M([[0, 0], [2, 0]]))
    with pytest.raises(RepresentationError):
        make_representation(sl2.algebra, bad)


def test_sl2_group_element(sl2):
    G = sl2.group_element
    expected = [[parse_expr(x, G.space) for x in row] for row in SL2_GROUP]
    assert G.matrix == expected


def test_recipes_invert_the_group_element(sl2, so22, book):
    for p in (sl2, so22, book):
        assert all(verify_recipe(r, p.group_element) for r in p.recipes)
        assert {r.target for r in p.recipes} == set(p.deck.space.coords)
