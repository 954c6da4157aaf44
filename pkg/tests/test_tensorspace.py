from plquant.expr import get_space
from plquant.parse import parse_expr
from plquant.tensor import TensorExpr, additive_split, embed_left, embed_right, tensor

S = get_space(("z",), ("Jp", "Jm", "J3"))


def E(text):
    return parse_expr(text, S)


def test_legwise_product():
    a = tensor(E("Jp"), E("exp(z*J3)"))
    b = tensor(E("Jm"), E("exp(-z*J3)"))
    assert a * b == tensor(E("Jp*Jm"), S.one())


def test_unit_and_embeddings():
    one = TensorExpr.unit(S, 2)
    x = E("Jp + J3")
    assert embed_left(x) * one == embed_left(x)
    assert embed_left(x) + embed_right(x) == tensor(x, S.one()) + tensor(S.one(), x)


def test_scalar_factor_moves_between_legs():
    z = S.field.param("z")
    assert tensor(E("Jp").scale(z), E("J3")) == tensor(E("Jp"), E("J3").scale(z))


def test_flip_and_negate():
    t = tensor(E("exp(-z*J3)"), E("Jp")) + tensor(E("Jp"), S.one())
    assert t.flip().flip() == t
    flipped = t.flip().negate_params(["z"])
    assert flipped == tensor(E("Jp"), E("exp(z*J3)")) + tensor(S.one(), E("Jp"))


def test_multiply_legs():
    t = tensor(E("exp(-z*J3)"), E("Jp")) + tensor(E("Jp"), S.one())
    assert t.multiply_legs() == E("Jp*exp(-z*J3) + Jp")


def test_leg_derivative():
    t = tensor(E("exp(-z*J3)"), E("Jp^2"))
    assert t.leg_diff(1, "J3") == tensor(E("-z*exp(-z*J3)"), E("Jp^2"))
    assert t.leg_diff(2, "Jp") == tensor(E("exp(-z*J3)"), E("2*Jp"))


def test_additive_split_of_primitive():
    t = tensor(E("J3"), S.one()) + tensor(S.one(), E("J3"))
    assert additive_split(t) is not None
    assert additive_split(tensor(E("Jp"), E("Jm"))) is None


def test_rank_three():
    a = tensor(E("Jp"), S.one(), E("J3"))
    assert a.rank == 3
    assert (a * a) == tensor(E("Jp^2"), S.one(), E("J3^2"))
