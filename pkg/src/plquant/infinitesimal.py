"""Quadratic Ansatz under the infinitesimal form of multiplicativity.

A bivector on a connected group is multiplicative exactly when it vanishes at
the identity and its Lie derivative along every left-invariant field X_a is
the left-invariant bivector of the cobracket of a:

    L_{X_a} Lambda = sum_bc f_a^bc X_b (x) X_c,    Lambda(e) = 0.

Both conditions are linear in beta and need only the invariant fields, never
the coordinate coproduct.  This gives an Ansatz route on groups whose
multiplication law leaves the closed-form expression class, and an
independent check of the coproduct route elsewhere.
"""

from __future__ import annotations

import time
from itertools import combinations

from .expr import Expr
from .linsolve import CONST
from .plsolver import BetaSystem, BracketTable, FunctionSet
from .sklyanin import vector_field
from .tensor import _acc


def left_fields(G, rep, recipes) -> list[list[Expr]]:
    """X_a^m for every generator a of the group's Lie algebra and coordinate m."""
    return [vector_field(G, M, recipes, "left") for M in rep.matrices]


def _directional(fields_a, dP) -> Expr:
    acc = None
    for k, d in enumerate(dP):
        x = fields_a[k]
        if d.is_zero() or x.is_zero():
            continue
        t = x * d
        acc = t if acc is None else acc + t
    return acc


def _target(fields, f, a, m, n, space) -> Expr:
    """(m, n) component of sum_bc f_a^bc X_b (x) X_c."""
    acc = space.zero()
    d = len(fields)
    for b in range(d):
        for c in range(d):
            v = f[a][b][c]
            if v.is_zero():
                continue
            t = fields[b][m] * fields[c][n]
            if t.terms:
                acc = acc + t.scale(v)
    return acc


def _add_expr(rows: dict, e: Expr, var):
    for key, c in e.terms.items():
        _acc(rows.setdefault(key, {}), var, c)


def impose_multiplicativity(fset: FunctionSet, G, rep, recipes, cobracket) -> BetaSystem:
    """Beta system for L_{X_a} Lambda = delta(a)^L over all a, plus Lambda(e) = 0."""
    t0 = time.perf_counter()
    space = G.space
    n = space.ncoords
    pairs = list(combinations(range(n), 2))
    s = fset.size
    products = [(k, l) for k in range(s) for l in range(k, s)]
    product_exprs = [fset[k] * fset[l] for k, l in products]
    S2 = len(products)
    dprod = [[P.diff(k) for k in range(n)] for P in product_exprs]
    fields = left_fields(G, rep, recipes)
    dfields = [[[X[m].diff(k) for k in range(n)] for m in range(n)] for X in fields]
    f = cobracket.f
    rows = []
    for a, X in enumerate(fields):
        dX = dfields[a]
        derivs = [_directional(X, dprod[u]) for u in range(S2)]
        for p, (m, nn) in enumerate(pairs):
            coeffs: dict = {}
            for q, (i, j) in enumerate(pairs):
                # Lambda^{ij} = +P, Lambda^{ji} = -P for every product P of pair q
                mult = []
                if (i, j) == (m, nn):
                    mult.append(("d", None))
                if nn == j:
                    mult.append(("x", -dX[m][i]))
                if nn == i:
                    mult.append(("x", dX[m][j]))
                if m == i:
                    mult.append(("x", -dX[nn][j]))
                if m == j:
                    mult.append(("x", dX[nn][i]))
                mult = [(k, w) for k, w in mult if w is None or not w.is_zero()]
                if not mult:
                    continue
                for u in range(S2):
                    var = q * S2 + u
                    for kind, w in mult:
                        if kind == "d":
                            if derivs[u] is not None:
                                _add_expr(coeffs, derivs[u], var)
                        else:
                            _add_expr(coeffs, w * product_exprs[u], var)
            rhs = _target(fields, f, a, m, nn, space)
            _add_expr(coeffs, -rhs, CONST)
            rows.extend(r for r in coeffs.values() if r)
    # Lambda(e) = 0
    for p in range(len(pairs)):
        row = {}
        for u in range(S2):
            v = product_exprs[u].value_at_zero()
            if not v.is_zero():
                row[p * S2 + u] = v
        if row:
            rows.append(row)
    stats = {"unknowns": len(pairs) * S2, "equations": len(rows), "function_set_size": s,
             "generation_seconds": round(time.perf_counter() - t0, 3)}
    return BetaSystem(space, fset, pairs, products, product_exprs, rows, stats)


def multiplicativity_defects(Q: BracketTable, G, rep, recipes, cobracket) -> dict:
    """Nonzero components of L_{X_a} Lambda - delta(a)^L, keyed by (a, m, n)."""
    space = Q.space
    n = space.ncoords
    fields = left_fields(G, rep, recipes)
    f = cobracket.f

    def lam(i, j):
        if i == j:
            return space.zero()
        return Q.get(i, j)

    out = {}
    for a, X in enumerate(fields):
        for m, nn in combinations(range(n), 2):
            acc = space.zero()
            for k in range(n):
                if not X[k].is_zero():
                    acc = acc + X[k] * lam(m, nn).diff(k)
                dm = X[m].diff(k)
                if not dm.is_zero():
                    acc = acc - dm * lam(k, nn)
                dn = X[nn].diff(k)
                if not dn.is_zero():
                    acc = acc - dn * lam(m, k)
            acc = acc - _target(fields, f, a, m, nn, space)
            if not acc.is_zero():
                out[(a, m, nn)] = acc
    return out
