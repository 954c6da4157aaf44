"""Quadratic Ansatz for the Poisson-Lie bracket on the dual group.

Q_ij = sum_{k<=l} beta[ij, kl] F_k F_l over a finite function set F.  The
homomorphism condition Delta{X_i, X_j} = {Delta X_i, Delta X_j} is linear in
beta; the linearization condition dQ_ij/dX_k(0) = c_ij^k then fixes the bracket.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .coproduct import CoproductMap, leg_factors
from .errors import NoSolution, NonUniqueSolution
from .expr import Expr, Space
from .linsolve import CONST, ParametricSolution, solve_sparse
from .series import series_in_params
from .tensor import TensorExpr, _acc, tensor


# -- function set ----------------------------------------------------------------------

@dataclass
class FunctionSet:
    functions: list[Expr]

    @property
    def size(self) -> int:
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)

    def __getitem__(self, k):
        return self.functions[k]

    def lines(self) -> list[str]:
        return [f"F{k + 1} = {f}" for k, f in enumerate(self.functions)]

    def convert(self, space: Space) -> "FunctionSet":
        return FunctionSet([f.convert(space) for f in self.functions])


def _expr_key(e: Expr):
    return tuple((sum(m), tuple(-x for x in m), l.sort_key()) for (m, l), _ in e.sorted_terms())


def build_function_set(G, delta: CoproductMap | None, coord_order=None) -> FunctionSet:
    """{1} + coordinates + entries of G + leg factors of every coproduct, deduplicated
    up to scalar multiples.  ``coord_order`` fixes the order of the coordinate block;
    without a coproduct only the entries of G are used."""
    space = G.space
    coord_order = list(coord_order or space.coords)
    head = [space.one()] + [space.coord(c) for c in coord_order]
    seen = {f.normalized() for f in head}
    extra: dict = {}
    sources = [e for row in G.matrix for e in row]
    for c in space.coords if delta is not None else ():
        for g, h in leg_factors(delta[c]):
            sources.extend([g, h])
    for e in sources:
        if e.is_zero():
            continue
        n = e.normalized()
        if n in seen:
            continue
        seen.add(n)
        extra[n] = n
    tail = sorted(extra.values(), key=_expr_key)
    return FunctionSet(head + tail)


# -- bracket tables -----------------------------------------------------------------------

@dataclass
class BracketTable:
    space: Space
    entries: dict  # (i, j) with i < j -> Expr

    def get(self, i: int, j: int) -> Expr:
        if i == j:
            return self.space.zero()
        if i < j:
            return self.entries.get((i, j), self.space.zero())
        return -self.entries.get((j, i), self.space.zero())

    def __eq__(self, other):
        if not isinstance(other, BracketTable) or other.space is not self.space:
            return NotImplemented
        n = self.space.ncoords
        return all(self.get(i, j) == other.get(i, j) for i, j in combinations(range(n), 2))

    def lines(self, fold_trig: bool = False, include_zero: bool = False) -> list[str]:
        names = self.space.coords
        out = []
        for i, j in combinations(range(self.space.ncoords), 2):
            q = self.get(i, j)
            if q.is_zero() and not include_zero:
                continue
            out.append(f"{{{names[i]}, {names[j]}}} = {q.format(fold_trig)}")
        return out

    def negate_params(self, names) -> "BracketTable":
        return BracketTable(self.space, {k: v.negate_params(names) for k, v in self.entries.items()})

    def substitute_params(self, values) -> "BracketTable":
        return BracketTable(self.space, {k: v.substitute_params(values) for k, v in self.entries.items()})

    def poisson(self, f: Expr, g: Expr) -> Expr:
        """{f, g} = sum_{k,l} df/dX_k dg/dX_l Q_kl."""
        df = {k: f.diff(k) for k in f.coords_used()}
        dg = {l: g.diff(l) for l in g.coords_used()}
        out = self.space.zero()
        for k, a in df.items():
            if a.is_zero():
                continue
            for l, b in dg.items():
                if k == l or b.is_zero():
                    continue
                q = self.get(k, l)
                if q.terms:
                    out = out + a * b * q
        return out


def zero_table(space: Space) -> BracketTable:
    return BracketTable(space, {})


def linear_table(space: Space, c, gen_of) -> BracketTable:
    """The bracket {X_i, X_j} = c_ij^k X_k with coordinates matched to generators."""
    coord_of = {g: k for k, g in enumerate(gen_of)}
    out = {}
    for i, j in combinations(range(space.ncoords), 2):
        e = space.zero()
        for gk, v in enumerate(c[gen_of[i]][gen_of[j]]):
            if not v.is_zero():
                e = e + space.coord(coord_of[gk]).scale(v)
        if e.terms:
            out[(i, j)] = e
    return BracketTable(space, out)


# -- beta system ------------------------------------------------------------------------------

@dataclass
class BetaSystem:
    space: Space
    fset: FunctionSet
    pairs: list            # coordinate index pairs i < j
    products: list         # function index pairs k <= l
    product_exprs: list
    rows: list
    stats: dict = dc_field(default_factory=dict)

    @property
    def n_unknowns(self) -> int:
        return len(self.pairs) * len(self.products)

    def var(self, pair_idx: int, prod_idx: int) -> int:
        return pair_idx * len(self.products) + prod_idx

    def label(self, var: int) -> str:
        p, u = divmod(var, len(self.products))
        i, j = self.pairs[p]
        k, l = self.products[u]
        return f"beta_{i + 1},{j + 1},{k + 1},{l + 1}"

    def var_of_label(self, i, j, k, l) -> int:
        return self.var(self.pairs.index((i - 1, j - 1)), self.products.index((k - 1, l - 1)))

    def bracket_from(self, values: dict) -> BracketTable:
        """Q_ij from scalar beta values (missing -> 0)."""
        out = {}
        S2 = len(self.products)
        for p, pair in enumerate(self.pairs):
            e = self.space.zero()
            for u in range(S2):
                v = values.get(p * S2 + u)
                if v is not None and not v.is_zero():
                    e = e + self.product_exprs[u].scale(v)
            if e.terms:
                out[pair] = e
        return BracketTable(self.space, out)


def _mul_left(P: Expr, A: TensorExpr, out: dict, var: int):
    """Accumulate coefficients of (P (x) 1) * A into out[basis][var]."""
    for (m1, l1), c1 in P.terms.items():
        for (a, b), c2 in A.terms.items():
            key = ((tuple(x + y for x, y in zip(m1, a[0])), l1 + a[1]), b)
            _acc(out.setdefault(key, {}), var, c1 * c2)


def _mul_right(P: Expr, A: TensorExpr, out: dict, var: int):
    for (m1, l1), c1 in P.terms.items():
        for (a, b), c2 in A.terms.items():
            key = (a, (tuple(x + y for x, y in zip(m1, b[0])), l1 + b[1]))
            _acc(out.setdefault(key, {}), var, c1 * c2)


def impose_homomorphism(fset: FunctionSet, delta: CoproductMap) -> BetaSystem:
    t0 = time.perf_counter()
    space = delta.space
    n = space.ncoords
    pairs = list(combinations(range(n), 2))
    s = fset.size
    products = [(k, l) for k in range(s) for l in range(k, s)]
    product_exprs = [fset[k] * fset[l] for k, l in products]
    S2 = len(products)
    images = [delta[c] for c in space.coords]
    d1 = [[images[i].leg_diff(1, k) for k in range(n)] for i in range(n)]
    d2 = [[images[i].leg_diff(2, k) for k in range(n)] for i in range(n)]
    fdelta = [delta.apply(f) for f in fset]
    prod_delta: dict[int, TensorExpr] = {}
    rows = []
    for p, (i, j) in enumerate(pairs):
        coeffs: dict = {}
        for q, (k, l) in enumerate(pairs):
            A1 = d1[i][k] * d1[j][l] - d1[i][l] * d1[j][k]
            A2 = d2[i][k] * d2[j][l] - d2[i][l] * d2[j][k]
            if A1.is_zero() and A2.is_zero():
                continue
            for u in range(S2):
                var = q * S2 + u
                P = product_exprs[u]
                if not A1.is_zero():
                    _mul_left(P, A1, coeffs, var)
                if not A2.is_zero():
                    _mul_right(P, A2, coeffs, var)
        for u, (a, b) in enumerate(products):
            if u not in prod_delta:
                prod_delta[u] = fdelta[a] * fdelta[b]
            var = p * S2 + u
            for key, c in prod_delta[u].terms.items():
                _acc(coeffs.setdefault(key, {}), var, -c)
        rows.extend(r for r in coeffs.values() if r)
    stats = {"unknowns": len(pairs) * S2, "equations": len(rows), "function_set_size": s,
             "generation_seconds": round(time.perf_counter() - t0, 3)}
    return BetaSystem(space, fset, pairs, products, product_exprs, rows, stats)


# -- solving ------------------------------------------------------------------------------

@dataclass
class PLSolution:
    system: BetaSystem
    family: ParametricSolution
    table: BracketTable
    beta: dict          # var -> Scalar (free parameters left at 0)
    beta_free_after_linearization: int
    effective_free: int
    stats: dict


def solve_homomorphism(system: BetaSystem) -> ParametricSolution:
    t0 = time.perf_counter()
    sol = solve_sparse(system.rows, list(range(system.n_unknowns)), system.space.field)
    system.stats["elimination_seconds"] = round(time.perf_counter() - t0, 3)
    system.stats.update({f"elim_{k}": v for k, v in sol.stats.as_dict().items()})
    system.stats["family_parameters"] = len(sol.free)
    return sol


def family_table(system: BetaSystem, family: ParametricSolution):
    """Q_ij as affine combinations of the free parameters: {param: BracketTable}."""
    S2 = len(system.products)
    per_param: dict = {}
    for p, pair in enumerate(system.pairs):
        for u in range(S2):
            var = p * S2 + u
            for w, c in family.values[var].items():
                tab = per_param.setdefault(w, {})
                tab[pair] = tab.get(pair, system.space.zero()) + system.product_exprs[u].scale(c)
    return {w: BracketTable(system.space, {k: v for k, v in t.items() if v.terms})
            for w, t in per_param.items()}


def impose_linearization(system: BetaSystem, family: ParametricSolution, c, gen_of) -> PLSolution:
    space = system.space
    field = space.field
    n = space.ncoords
    S2 = len(system.products)
    grads = [P.gradient_at_zero() for P in system.product_exprs]
    coord_of = {g: k for k, g in enumerate(gen_of)}
    rows = []
    for p, (i, j) in enumerate(system.pairs):
        target = {coord_of[g]: v for g, v in enumerate(c[gen_of[i]][gen_of[j]]) if not v.is_zero()}
        for k in range(n):
            row: dict = {}
            for u in range(S2):
                g = grads[u].get(k)
                if g is None:
                    continue
                for w, coeff in family.values[p * S2 + u].items():
                    _acc(row, w, g * coeff)
            if k in target:
                _acc(row, CONST, -target[k])
            if row:
                rows.append(row)
    try:
        lin = solve_sparse(rows, list(family.free), field)
    except NoSolution as exc:
        raise NoSolution("linearization condition has no solution within the Ansatz") from exc
    fixed = lin.substitute({}, field)
    free_vals = {w: fixed[w] for w in family.free}
    beta = family.substitute(free_vals, field)
    table = system.bracket_from(beta)
    # directions still free after linearization, measured on the bracket itself
    directions = []
    for w in lin.free:
        unit = {}
        for v in family.free:
            coeff = lin.values[v].get(w)
            unit[v] = coeff if coeff is not None else field.zero
        # beta moves along this direction when w changes
        dir_beta = {}
        for var in family.unknowns:
            acc = field.zero
            for v, cc in family.values[var].items():
                if v != CONST and not unit[v].is_zero():
                    acc = acc + cc * unit[v]
            if not acc.is_zero():
                dir_beta[var] = acc
        directions.append(system.bracket_from(dir_beta))
    effective = _rank_of_tables(directions, space)
    stats = {"linearization_equations": len(rows), "beta_free_after_linearization": len(lin.free),
             "effective_free": effective}
    sol = PLSolution(system, family, table, beta, len(lin.free), effective, stats)
    if effective:
        raise NonUniqueSolution(
            f"linearization leaves {effective} free direction(s) in the bracket", residual=effective)
    return sol


def _rank_of_tables(tables: list[BracketTable], space: Space) -> int:
    """Number of linearly independent nonzero tables (coefficient-level rank)."""
    vecs = []
    for t in tables:
        vec = {}
        for pair, e in t.entries.items():
            for key, v in e.terms.items():
                vec[(pair, key)] = v
        vecs.append(vec)
    if not any(vecs):
        return 0
    rows = []
    keys = sorted({k for v in vecs for k in v}, key=repr)
    index = {k: n for n, k in enumerate(keys)}
    for v in vecs:
        rows.append({index[k]: c for k, c in v.items()})
    # rank of the row set = number of pivots
    sol = solve_sparse([r for r in rows if r], list(range(len(keys))), space.field)
    return sol.stats.pivots


def solve_pl_bracket(G, delta: CoproductMap, c, gen_of, fset: FunctionSet | None = None,
                     coord_order=None):
    if fset is None:
        fset = build_function_set(G, delta, coord_order)
    system = impose_homomorphism(fset, delta)
    family = solve_homomorphism(system)
    sol = impose_linearization(system, family, c, gen_of)
    sol.stats.update(system.stats)
    return sol


# -- checks -----------------------------------------------------------------------------------

def jacobi_defects(Q: BracketTable) -> dict:
    space = Q.space
    n = space.ncoords
    out = {}
    for i, j, k in combinations(range(n), 3):
        total = space.zero()
        for a, b, cc in ((i, j, k), (j, k, i), (k, i, j)):
            inner = Q.get(b, cc)
            for m in inner.coords_used():
                q = Q.get(a, m)
                if q.terms:
                    total = total + q * inner.diff(m)
        if not total.is_zero():
            out[(i, j, k)] = total
    return out


def check_jacobi(Q: BracketTable) -> bool:
    return not jacobi_defects(Q)


def check_classical_limit(Q: BracketTable, c, gen_of) -> bool:
    """Order-0 expansion in the parameters equals the linear bracket."""
    space = Q.space
    L = linear_table(space, c, gen_of)
    for i, j in combinations(range(space.ncoords), 2):
        if series_in_params(Q.get(i, j), 0) != series_in_params(L.get(i, j), 0):
            return False
    return True


def check_linearization(Q: BracketTable, c, gen_of) -> bool:
    space = Q.space
    L = linear_table(space, c, gen_of)
    return all(Q.get(i, j).linear_part() == L.get(i, j)
               for i, j in combinations(range(space.ncoords), 2))


def homomorphism_defects(Q: BracketTable, delta: CoproductMap) -> dict:
    """Delta({X_i, X_j}) - {Delta X_i, Delta X_j} on the product Poisson structure."""
    space = Q.space
    n = space.ncoords
    images = [delta[c] for c in space.coords]
    one = space.one()
    out = {}
    for i, j in combinations(range(n), 2):
        lhs = delta.apply(Q.get(i, j))
        rhs = TensorExpr.zero(space, 2)
        for k, l in combinations(range(n), 2):
            q = Q.get(k, l)
            if q.is_zero():
                continue
            a1 = images[i].leg_diff(1, k) * images[j].leg_diff(1, l) \
                - images[i].leg_diff(1, l) * images[j].leg_diff(1, k)
            a2 = images[i].leg_diff(2, k) * images[j].leg_diff(2, l) \
                - images[i].leg_diff(2, l) * images[j].leg_diff(2, k)
            if not a1.is_zero():
                rhs = rhs + tensor(q, one) * a1
            if not a2.is_zero():
                rhs = rhs + tensor(one, q) * a2
        d = lhs - rhs
        if not d.is_zero():
            out[(i, j)] = d
    return out


__all__ = ["FunctionSet", "BracketTable", "BetaSystem", "PLSolution", "build_function_set",
           "impose_homomorphism", "solve_homomorphism", "impose_linearization", "solve_pl_bracket",
           "jacobi_defects", "check_jacobi", "check_classical_limit", "homomorphism_defects",
           "linear_table", "zero_table", "family_table", "check_linearization"]
