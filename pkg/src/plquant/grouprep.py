"""Faithful matrix representations and closed-form exponentials.

``exp(t M)`` is obtained by Hermite interpolation of ``exp(lambda t)`` on the
roots of the minimal polynomial of M, which must split into linear factors over
the scalar field.  Entries come out as sums of ``t^s exp(mu t)`` terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import sympy

from .bialgebra import LieAlgebraData
from .errors import NonClosedFormSpectrum, NotFaithful, RepresentationError
from .expr import Expr, LinForm, Space
from .linsolve import CONST, solve_sparse
from .scalar import Scalar, ScalarField

Matrix = list  # list of rows


# -- dense scalar linear algebra -------------------------------------------------

def mat_mul(A, B, zero):
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(p):
            s = zero
            for k in range(m):
                a = Ai[k]
                if a.is_zero():
                    continue
                b = B[k][j]
                if not b.is_zero():
                    s = s + a * b
            row.append(s)
        out.append(row)
    return out


def identity(n, field):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def rank(vectors: list[list[Scalar]], field: ScalarField) -> int:
    rows = [list(v) for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                fct = rows[i][col] * inv
                rows[i] = [a - fct * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def dense_inverse(W, field):
    n = len(W)
    aug = [list(W[i]) + [field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if not aug[i][col].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [a * inv for a in aug[col]]
        for i in range(n):
            if i != col and not aug[i][col].is_zero():
                fct = aug[i][col]
                aug[i] = [a - fct * b for a, b in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


# -- representations -------------------------------------------------------------

@dataclass(frozen=True)
class Representation:
    names: tuple[str, ...]
    matrices: tuple  # one N x N tuple-of-tuples per generator
    faithful: bool = True

    @property
    def dim(self) -> int:
        return len(self.matrices[0]) if self.matrices else 0


def _freeze(M):
    return tuple(tuple(r) for r in M)


def check_homomorphism(rep: Representation, algebra: LieAlgebraData) -> list[tuple]:
    """Pairs (j, k) where [rho_j, rho_k] != sum_i c_jk^i rho_i."""
    field = algebra.field
    d = algebra.dim
    bad = []
    for j in range(d):
        for k in range(j + 1, d):
            A, B = rep.matrices[j], rep.matrices[k]
            comm = mat_mul(A, B, field.zero)
            comm2 = mat_mul(B, A, field.zero)
            N = rep.dim
            target = [[field.zero] * N for _ in range(N)]
            for i, c in algebra.bracket(j, k).items():
                for a in range(N):
                    for b in range(N):
                        target[a][b] = target[a][b] + c * rep.matrices[i][a][b]
            if any(comm[a][b] - comm2[a][b] != target[a][b] for a in range(N) for b in range(N)):
                bad.append((j, k))
    return bad


def is_faithful(matrices, field) -> bool:
    vecs = [[x for row in M for x in row] for M in matrices]
    return rank(vecs, field) == len(matrices)


def adjoint_rep(algebra: LieAlgebraData, strict: bool = True) -> Representation:
    """(ad x_i)_{kj} = c_ij^k."""
    d, c = algebra.dim, algebra.c
    mats = tuple(tuple(tuple(c[i][j][k] for j in range(d)) for k in range(d)) for i in range(d))
    faithful = is_faithful(mats, algebra.field)
    if strict and not faithful:
        raise NotFaithful(f"adjoint representation of {algebra.names} is not faithful; "
                          "supply a representation in the deck")
    return Representation(algebra.names, mats, faithful)


def make_representation(algebra: LieAlgebraData, matrices: dict) -> Representation:
    mats = []
    for name in algebra.names:
        if name not in matrices:
            raise RepresentationError(f"representation lacks a matrix for {name}")
        mats.append(_freeze(matrices[name]))
    sizes = {len(M) for M in mats} | {len(r) for M in mats for r in M}
    if len(sizes) != 1:
        raise RepresentationError("representation matrices must be square of one common size")
    rep = Representation(algebra.names, tuple(mats), is_faithful(mats, algebra.field))
    bad = check_homomorphism(rep, algebra)
    if bad:
        j, k = bad[0]
        raise RepresentationError(
            f"representation fails the bracket relation for [{algebra.names[j]}, {algebra.names[k]}]")
    if not rep.faithful:
        raise NotFaithful("supplied representation is not faithful")
    return rep


# -- sympy bridge ------------------------------------------------------------------

def _symbols(field: ScalarField):
    return [sympy.Symbol(p) for p in field.params]


def scalar_to_sympy(s: Scalar, syms) -> sympy.Expr:
    def poly(p):
        out = sympy.Integer(0)
        for mono, c in p.terms():
            term = sympy.Rational(int(c.p), int(c.q))
            for sym, e in zip(syms, mono):
                if e:
                    term *= sym ** e
            out += term
        return out
    return (poly(s.re) + sympy.I * poly(s.im)) / poly(s.den)


def sympy_to_scalar(expr, field: ScalarField, syms) -> Scalar:
    num, den = sympy.fraction(sympy.together(expr))

    def conv(e):
        if not syms:
            re, im = sympy.expand(e).as_real_imag()
            return field.rational(_frac(re), _frac(im))
        P = sympy.Poly(sympy.expand(e), *syms, domain="QQ_I")
        out = field.zero
        for mono, c in P.terms():
            re, im = sympy.sympify(c).as_real_imag()
            term = field.rational(_frac(re), _frac(im))
            for k, e2 in enumerate(mono):
                if e2:
                    term = term * field.param(field.params[k]) ** e2
            out = out + term
        return out
    return conv(num) / conv(den)


def _frac(r):
    from fractions import Fraction
    r = sympy.Rational(r)
    return Fraction(int(r.p), int(r.q))


# -- minimal polynomial and exponential ---------------------------------------------

def minimal_polynomial(M, field: ScalarField) -> list[Scalar]:
    """Monic coefficients [a_0, ..., a_{k-1}, 1] of the minimal polynomial."""
    n = len(M)
    powers = [identity(n, field)]
    while True:
        nxt = mat_mul(powers[-1], M, field.zero)
        k = len(powers)
        rows = []
        for a in range(n):
            for b in range(n):
                row = {j: powers[j][a][b] for j in range(k) if not powers[j][a][b].is_zero()}
                if not nxt[a][b].is_zero():
                    row[CONST] = -nxt[a][b]
                if row:
                    rows.append(row)
        try:
            sol = solve_sparse(rows, list(range(k)), field)
        except Exception as exc:
            from .errors import NoSolution
            if not isinstance(exc, NoSolution):
                raise
            powers.append(nxt)
            if len(powers) > n + 1:
                raise AssertionError("minimal polynomial degree exceeds matrix size")
            continue
        coeffs = sol.substitute({}, field)
        # M^k = sum_j a_j M^j  =>  lambda^k - sum_j a_j lambda^j
        return [-coeffs[j] for j in range(k)] + [field.one]


def spectrum(M, field: ScalarField) -> list[tuple[Scalar, int]]:
    """Roots of the minimal polynomial with multiplicities, in a canonical order."""
    coeffs = minimal_polynomial(M, field)
    if len(coeffs) == 2:
        return [(-coeffs[0], 1)]
    if all(c.is_zero() for c in coeffs[:-1]):
        return [(field.zero, len(coeffs) - 1)]
    syms = _symbols(field)
    lam = sympy.Symbol("lambda_")
    poly = sum(scalar_to_sympy(c, syms) * lam ** k for k, c in enumerate(coeffs))
    num, _ = sympy.fraction(sympy.together(poly))
    _, factors = sympy.factor_list(sympy.expand(num), lam, *syms, gaussian=True)
    roots: dict = {}
    for fac, mult in factors:
        deg = sympy.degree(fac, lam)
        if deg == 0:
            continue
        if deg != 1:
            raise NonClosedFormSpectrum(
                f"minimal polynomial has an irreducible factor of degree {deg} in lambda: {fac}")
        a = fac.coeff(lam, 1)
        b = fac.coeff(lam, 0)
        root = sympy_to_scalar(-b / a, field, syms)
        roots[root] = roots.get(root, 0) + mult
    out = sorted(roots.items(), key=lambda kv: kv[0].sort_key())
    if sum(m for _, m in out) != len(coeffs) - 1:
        raise NonClosedFormSpectrum("root multiplicities do not match the minimal polynomial degree")
    return out


def matrix_exp(M, coord: int, space: Space) -> list[list[Expr]]:
    """exp(X M) for the coordinate with index ``coord``."""
    field = space.field
    n = len(M)
    M = [list(r) for r in M]
    roots = spectrum(M, field)
    K = sum(m for _, m in roots)
    conditions = [(mu, s) for mu, m in roots for s in range(m)]
    W = []
    for mu, s in conditions:
        row = []
        for k in range(K):
            if k < s:
                row.append(field.zero)
            else:
                row.append(field(factorial(k) // factorial(k - s)) * mu ** (k - s))
        W.append(row)
    Winv = dense_inverse(W, field)
    powers = [identity(n, field)]
    for _ in range(1, K):
        powers.append(mat_mul(powers[-1], M, field.zero))
    out = [[space.zero() for _ in range(n)] for _ in range(n)]
    for col, (mu, s) in enumerate(conditions):
        B = [[field.zero] * n for _ in range(n)]
        for k in range(K):
            w = Winv[k][col]
            if w.is_zero():
                continue
            for a in range(n):
                for b in range(n):
                    if not powers[k][a][b].is_zero():
                        B[a][b] = B[a][b] + w * powers[k][a][b]
        mono = [0] * space.ncoords
        mono[coord] = s
        lin = LinForm.from_dict({coord: mu})
        for a in range(n):
            for b in range(n):
                if not B[a][b].is_zero():
                    out[a][b] = out[a][b] + space.term(B[a][b], tuple(mono), lin)
    return out


def expr_mat_mul(A, B, space: Space):
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            s = space.zero()
            for k in range(m):
                if A[i][k].terms and B[k][j].terms:
                    s = s + A[i][k] * B[k][j]
            row.append(s)
        out.append(row)
    return out


def expr_identity(n, space):
    return [[space.one() if i == j else space.zero() for j in range(n)] for i in range(n)]


@dataclass
class GroupElement:
    space: Space
    matrix: list
    order: tuple[int, ...]      # generator indices in product order
    coords: tuple[int, ...]     # coordinate index carried by each generator
    factors: list               # the one-parameter exponentials, in product order
    inverse_factors: list

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def inverse(self):
        out = expr_identity(self.dim, self.space)
        for F in reversed(self.inverse_factors):
            out = expr_mat_mul(out, F, self.space)
        return out

    def format_rows(self, fold_trig: bool = False) -> list[str]:
        return ["[" + ", ".join(e.format(fold_trig) for e in row) + "]" for row in self.matrix]


def build_group_element(rep: Representation, order, coords, space: Space) -> GroupElement:
    """Ordered product of exp(X_g rho(x^g)) for g in ``order``.

    ``coords[g]`` is the coordinate index paired with generator g.
    """
    n = rep.dim
    G = expr_identity(n, space)
    factors, inv_factors = [], []
    for g in order:
        M = rep.matrices[g]
        E = matrix_exp(M, coords[g], space)
        Einv = matrix_exp([[-x for x in r] for r in M], coords[g], space)
        factors.append(E)
        inv_factors.append(Einv)
        G = expr_mat_mul(G, E, space)
    return GroupElement(space, G, tuple(order), tuple(coords), factors, inv_factors)
