"""Sklyanin bracket on a dual group whose Lie bialgebra is a coboundary.

Left and right invariant vector fields act on a coordinate through its
recipe: X^L_i(X_m) = d/dt recipe_m(G exp(t rho_i)) at t = 0, and X^R_i uses
exp(t rho_i) G.  The derivative is taken exactly with dual numbers a + t b,
t^2 = 0, so no limits are needed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .expr import Expr, Space, affine_decompose
from .grouprep import GroupElement, Representation
from .plsolver import BracketTable
from .recipes import ExprAlgebra, Recipe, evaluate


@dataclass(frozen=True)
class Dual:
    value: Expr
    slope: Expr


class DualAlgebra:
    """Recipe evaluation on G + t*dG with t^2 = 0."""

    def __init__(self, space: Space, G, dG, leaves: dict[str, Dual]):
        self.space = space
        self.field = space.field
        self.G = G
        self.dG = dG
        self.leaves = leaves
        self._plain = ExprAlgebra(space, G)

    def const(self, s):
        return Dual(self.space.const(s), self.space.zero())

    def leaf(self, name):
        if name not in self.leaves:
            raise DomainError(f"recipe refers to coordinate {name} before it is available")
        return self.leaves[name]

    def entry(self, a, b):
        return Dual(self.G[a][b], self.dG[a][b])

    def neg(self, a):
        return Dual(-a.value, -a.slope)

    def add(self, a, b):
        return Dual(a.value + b.value, a.slope + b.slope)

    def sub(self, a, b):
        return Dual(a.value - b.value, a.slope - b.slope)

    def mul(self, a, b):
        return Dual(a.value * b.value, a.value * b.slope + a.slope * b.value)

    def scale(self, a, s):
        return Dual(a.value.scale(s), a.slope.scale(s))

    def div(self, a, b):
        if b.value.as_unit() is None:
            raise DomainError(f"division by a non-unit {b.value}")
        inv = b.value.unit_inverse()
        q = a.value * inv
        return Dual(q, (a.slope - q * b.slope) * inv)

    def log(self, a):
        value = self._plain.log(a.value)
        return Dual(value, a.slope * a.value.unit_inverse())

    def exp(self, a):
        dec = affine_decompose(a.value)
        if dec is None or not dec[1].is_zero():
            raise DomainError(f"exp of a non-linear argument {a.value}")
        e = self.space.exp(dec[0])
        return Dual(e, a.slope * e)


def _mat_mul(A, B, space):
    n, m, p = len(A), len(B), len(B[0])
    out = [[space.zero() for _ in range(p)] for _ in range(n)]
    for i in range(n):
        for k in range(m):
            a = A[i][k]
            if a.is_zero():
                continue
            for j in range(p):
                b = B[k][j]
                if not b.is_zero():
                    out[i][j] = out[i][j] + a * b
    return out


def vector_field(G: GroupElement, rho, recipes: list[Recipe], side: str) -> list[Expr]:
    """Components X(X_m) for every coordinate m, in space order."""
    space = G.space
    R = [[space.const(x) for x in row] for row in rho]
    dG = _mat_mul(G.matrix, R, space) if side == "left" else _mat_mul(R, G.matrix, space)
    leaves: dict[str, Dual] = {}
    alg = DualAlgebra(space, G.matrix, dG, leaves)
    for r in recipes:
        leaves[r.target] = evaluate(r.ast, alg)
    for c in space.coords:
        if leaves[c].value != space.coord(c):
            raise DomainError(f"recipe for {c} does not reproduce the coordinate")
    return [leaves[c].slope for c in space.coords]


def invariant_fields(G: GroupElement, rep: Representation, recipes: list[Recipe]):
    left = [vector_field(G, M, recipes, "left") for M in rep.matrices]
    right = [vector_field(G, M, recipes, "right") for M in rep.matrices]
    return left, right


def sklyanin_bracket(G: GroupElement, rep: Representation, r, recipes: list[Recipe],
                     sign: int = 1) -> BracketTable:
    """{X_m, X_n} = sign * sum_ij R^{ij} (XL_i X_m XL_j X_n - XR_i X_m XR_j X_n).

    ``r`` is the skew r-matrix of the dual bialgebra in the basis of ``rep``.  The
    default sign makes the linear part of the bracket equal to the original Lie
    bracket with the cocommutator built as [x (x) 1 + 1 (x) x, r].
    """
    space = G.space
    n = space.ncoords
    left, right = invariant_fields(G, rep, recipes)
    R = r.R
    d = len(R)
    entries = {}
    for m in range(n):
        for k in range(m + 1, n):
            acc = space.zero()
            for i in range(d):
                for j in range(d):
                    if R[i][j].is_zero():
                        continue
                    term = left[i][m] * left[j][k] - right[i][m] * right[j][k]
                    acc = acc + term.scale(R[i][j])
            if sign < 0:
                acc = -acc
            if acc.terms:
                entries[(m, k)] = acc
    return BracketTable(space, entries)
