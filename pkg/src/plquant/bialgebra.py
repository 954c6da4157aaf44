"""Lie bialgebras given by structure tensors.

Conventions (dense, 0-based indices):

* ``c[i][j][k]``: [x_i, x_j] = sum_k c[i][j][k] x_k
* ``f[i][j][k]``: delta(x_i) = sum_{j<k} f[i][j][k] x_j ^ x_k, stored fully
  antisymmetric in (j, k), so as a tensor delta(x_i) = sum_{j,k} f[i][j][k] x_j (x) x_k.

The dual bialgebra swaps the roles: [x^j, x^k] = sum_i f[i][j][k] x^i and
delta*(x^k) = sum_{i<j} c[i][j][k] x^i ^ x^j.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .errors import InvalidInput
from .linsolve import CONST, solve_sparse
from .scalar import Scalar, ScalarField


def zeros3(field: ScalarField, d: int):
    return [[[field.zero] * d for _ in range(d)] for _ in range(d)]


def _freeze(t):
    return tuple(tuple(tuple(row) for row in mat) for mat in t)


@dataclass(frozen=True)
class LieAlgebraData:
    names: tuple[str, ...]
    field: ScalarField
    c: tuple

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name) -> int:
        if isinstance(name, int):
            return name
        try:
            return self.names.index(name)
        except ValueError:
            raise InvalidInput(f"unknown generator {name!r}") from None

    def bracket(self, i: int, j: int) -> dict[int, Scalar]:
        return {k: v for k, v in enumerate(self.c[i][j]) if not v.is_zero()}

    def is_abelian(self) -> bool:
        return all(v.is_zero() for mat in self.c for row in mat for v in row)


@dataclass(frozen=True)
class Cocommutator:
    f: tuple

    def is_zero(self) -> bool:
        return all(v.is_zero() for mat in self.f for row in mat for v in row)


@dataclass(frozen=True)
class RMatrix:
    """Skew r-matrix; ``R[a][b]`` is the full antisymmetric component array."""

    R: tuple

    def wedge_terms(self) -> list[tuple[int, int, Scalar]]:
        d = len(self.R)
        return [(a, b, self.R[a][b]) for a, b in combinations(range(d), 2)
                if not self.R[a][b].is_zero()]

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.R for v in row)


@dataclass(frozen=True)
class LieBialgebra:
    algebra: LieAlgebraData
    cocommutator: Cocommutator
    name: str = ""

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def field(self):
        return self.algebra.field

    @property
    def names(self):
        return self.algebra.names


@dataclass
class ValidationReport:
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, kind: str, indices: tuple, value: Scalar):
        self.failures.append((kind, indices, value))

    def lines(self, names=None) -> list[str]:
        out = []
        for kind, idx, val in self.failures:
            label = ",".join(names[i] if names else str(i) for i in idx)
            out.append(f"{kind}[{label}] = {val}")
        return out


def make_bialgebra(names, field, brackets: dict, cobrackets: dict, name="") -> LieBialgebra:
    """brackets: (i, j) -> {k: coeff}; cobrackets: i -> {(j, k): coeff} (wedge terms)."""
    d = len(names)
    c = zeros3(field, d)
    for (i, j), res in brackets.items():
        if i == j:
            raise InvalidInput(f"bracket of {names[i]} with itself must vanish")
        for k, v in res.items():
            v = field(v)
            c[i][j][k] = c[i][j][k] + v
            c[j][i][k] = c[j][i][k] - v
    f = zeros3(field, d)
    for i, terms in cobrackets.items():
        for (j, k), v in terms.items():
            if j == k:
                raise InvalidInput("x ^ x vanishes identically")
            v = field(v)
            f[i][j][k] = f[i][j][k] + v
            f[i][k][j] = f[i][k][j] - v
    return LieBialgebra(LieAlgebraData(tuple(names), field, _freeze(c)), Cocommutator(_freeze(f)), name)


def _jacobi(t, d, field, report, kind):
    for i, j, k in combinations(range(d), 3):
        for l in range(d):
            s = field.zero
            for m in range(d):
                s = s + t[i][j][m] * t[m][k][l] + t[j][k][m] * t[m][i][l] + t[k][i][m] * t[m][j][l]
            if not s.is_zero():
                report.add(kind, (i, j, k, l), s)


def _antisym(t, d, report, kind):
    for i in range(d):
        for j in range(d):
            for k in range(d):
                if not (t[i][j][k] + t[j][i][k]).is_zero():
                    report.add(kind, (i, j, k), t[i][j][k] + t[j][i][k])


def dual_structure(f, d):
    """Structure constants of the dual bracket: C[j][k][i] = f[i][j][k]."""
    return tuple(tuple(tuple(f[i][j][k] for i in range(d)) for k in range(d)) for j in range(d))


def adjoint_on_tensor(c, T, i, d, field):
    """(ad_{x_i} T)^{ab} for a rank-2 component array T."""
    out = [[field.zero] * d for _ in range(d)]
    for a in range(d):
        for b in range(d):
            s = field.zero
            for m in range(d):
                if not c[i][m][a].is_zero():
                    s = s + c[i][m][a] * T[m][b]
                if not c[i][m][b].is_zero():
                    s = s + c[i][m][b] * T[a][m]
            out[a][b] = s
    return out


def validate(b: LieBialgebra) -> ValidationReport:
    report = ValidationReport()
    d, field = b.dim, b.field
    c, f = b.algebra.c, b.cocommutator.f
    _antisym(c, d, report, "antisymmetry")
    for i in range(d):
        for j in range(d):
            for k in range(d):
                if not (f[i][j][k] + f[i][k][j]).is_zero():
                    report.add("coantisymmetry", (i, j, k), f[i][j][k] + f[i][k][j])
    _jacobi(c, d, field, report, "jacobi")
    _jacobi(dual_structure(f, d), d, field, report, "cojacobi")
    for i, j in combinations(range(d), 2):
        lhs = [[field.zero] * d for _ in range(d)]
        for m in range(d):
            if c[i][j][m].is_zero():
                continue
            for a in range(d):
                for bb in range(d):
                    lhs[a][bb] = lhs[a][bb] + c[i][j][m] * f[m][a][bb]
        r1 = adjoint_on_tensor(c, f[j], i, d, field)
        r2 = adjoint_on_tensor(c, f[i], j, d, field)
        for a in range(d):
            for bb in range(d):
                diff = lhs[a][bb] - r1[a][bb] + r2[a][bb]
                if not diff.is_zero():
                    report.add("cocycle", (i, j, a, bb), diff)
    return report


def toggle_name(name: str) -> str:
    return name[:-1] if name.endswith("*") else name + "*"


def dualize(b: LieBialgebra, names=None) -> LieBialgebra:
    rep = validate(b)
    if not rep.ok:
        raise InvalidInput("cannot dualize an invalid bialgebra: " + "; ".join(rep.lines(b.names)[:5]))
    d = b.dim
    c_dual = dual_structure(b.cocommutator.f, d)
    # delta*(x^k) = sum_{i,j} c[i][j][k] x^i (x) x^j
    f_dual = tuple(tuple(tuple(b.algebra.c[i][j][k] for j in range(d)) for i in range(d))
                   for k in range(d))
    names = tuple(names) if names else tuple(toggle_name(n) for n in b.names)
    return LieBialgebra(LieAlgebraData(names, b.field, c_dual), Cocommutator(f_dual),
                        toggle_name(b.name) if b.name else "")


def cocommutator_from_r(algebra: LieAlgebraData, r: RMatrix) -> Cocommutator:
    d, field, c = algebra.dim, algebra.field, algebra.c
    f = zeros3(field, d)
    R = r.R
    for i in range(d):
        for a in range(d):
            for bb in range(d):
                s = field.zero
                for j in range(d):
                    if not c[i][j][a].is_zero() and not R[j][bb].is_zero():
                        s = s + c[i][j][a] * R[j][bb]
                    if not R[a][j].is_zero() and not c[i][j][bb].is_zero():
                        s = s + R[a][j] * c[i][j][bb]
                f[i][a][bb] = s
    return Cocommutator(_freeze(f))


def r_matrix(field, d, wedges: dict) -> RMatrix:
    """wedges: (a, b) -> coeff meaning coeff * x_a ^ x_b."""
    R = [[field.zero] * d for _ in range(d)]
    for (a, b), v in wedges.items():
        v = field(v)
        R[a][b] = R[a][b] + v
        R[b][a] = R[b][a] - v
    return RMatrix(tuple(tuple(row) for row in R))


@dataclass
class CoboundaryResult:
    r: RMatrix | None
    solution_dim: int

    @property
    def is_coboundary(self) -> bool:
        return self.r is not None


def coboundary_solve(b: LieBialgebra) -> CoboundaryResult:
    """Solve delta(x_i) = [x_i (x) 1 + 1 (x) x_i, r] for a skew r (linear only)."""
    d, field, c, f = b.dim, b.field, b.algebra.c, b.cocommutator.f
    pairs = list(combinations(range(d), 2))
    unknowns = list(range(len(pairs)))
    rows = []
    for i in range(d):
        for p, q in pairs:
            row: dict = {}
            # T_i^{pq} = sum_j c_ij^p R^{jq} + R^{pj} c_ij^q, R^{jk} = +-r_{(j,k)}
            for u, (j, k) in enumerate(pairs):
                coeff = field.zero
                # R^{jk} = r_u, R^{kj} = -r_u
                if k == q:
                    coeff = coeff + c[i][j][p]
                if j == q:
                    coeff = coeff - c[i][k][p]
                if j == p:
                    coeff = coeff + c[i][k][q]
                if k == p:
                    coeff = coeff - c[i][j][q]
                if not coeff.is_zero():
                    row[u] = coeff
            if not f[i][p][q].is_zero():
                row[CONST] = -f[i][p][q]
            if row:
                rows.append(row)
    try:
        sol = solve_sparse(rows, unknowns, field)
    except Exception as exc:
        from .errors import NoSolution
        if isinstance(exc, NoSolution):
            return CoboundaryResult(None, 0)
        raise
    values = sol.substitute({}, field)
    R = [[field.zero] * d for _ in range(d)]
    for u, (j, k) in enumerate(pairs):
        R[j][k] = values[u]
        R[k][j] = -values[u]
    r = RMatrix(tuple(tuple(row) for row in R))
    if cocommutator_from_r(b.algebra, r).f != b.cocommutator.f:
        raise AssertionError("coboundary solution failed re-substitution")
    return CoboundaryResult(r, len(sol.free))


def r_in_solution_set(b: LieBialgebra, r: RMatrix) -> bool:
    return cocommutator_from_r(b.algebra, r).f == b.cocommutator.f


def format_table(b: LieBialgebra) -> list[str]:
    """Nonzero brackets and cocommutators as text lines."""
    d, names = b.dim, b.names
    out = []
    for i, j in combinations(range(d), 2):
        res = b.algebra.bracket(i, j)
        if res:
            out.append(f"[{names[i]}, {names[j]}] = {_lin_text(res, names)}")
    for i in range(d):
        terms = [(j, k, b.cocommutator.f[i][j][k]) for j, k in combinations(range(d), 2)
                 if not b.cocommutator.f[i][j][k].is_zero()]
        if terms:
            out.append(f"delta({names[i]}) = " + _wedge_text(terms, names))
    return out


def _lin_text(res: dict, names) -> str:
    from .printing import _join, mul_safe
    parts = []
    for k, v in sorted(res.items()):
        neg = v.is_negative_looking()
        mag = -v if neg else v
        body = names[k] if mag.is_one() else f"{mul_safe(str(mag))}*{names[k]}"
        parts.append(("-" if neg else "+", body))
    return _join(parts)


def _wedge_text(terms, names) -> str:
    from .printing import _join, mul_safe
    parts = []
    for j, k, v in terms:
        neg = v.is_negative_looking()
        mag = -v if neg else v
        w = f"{names[j]} ^ {names[k]}"
        body = w if mag.is_one() else f"{mul_safe(str(mag))}*{w}"
        parts.append(("-" if neg else "+", body))
    return _join(parts)
