"""Coordinate-extraction recipes: expressions in the matrix entries E[a,b] of a
group element that return one coordinate.

A recipe body is parsed with :mod:`plquant.parse`; names inside it refer to
coordinates recovered by earlier recipes.  The same body is evaluated in
several algebras (plain entries, tensorized entries, inverse entries, dual
numbers), each supplied by a small adapter object.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .errors import DomainError, ParseError, RecipeSearchFailed
from .expr import Expr, LinForm, affine_decompose
from .linsolve import CONST, solve_sparse
from .parse import parse_ast


@dataclass
class Recipe:
    target: str
    body: str
    ast: tuple = dc_field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.ast is None:
            self.ast = parse_ast(self.body)


# -- evaluation ---------------------------------------------------------------------

def evaluate(node, alg):
    tag = node[0]
    if tag == "num":
        return alg.const(alg.field(node[1]))
    if tag == "i":
        return alg.const(alg.field.i)
    if tag == "name":
        name = node[1]
        if name in alg.field.params:
            return alg.const(alg.field.param(name))
        return alg.leaf(name)
    if tag == "entry":
        return alg.entry(node[1], node[2])
    if tag == "neg":
        return alg.neg(evaluate(node[1], alg))
    if tag in ("add", "sub", "mul", "div"):
        a = evaluate(node[1], alg)
        b = evaluate(node[2], alg)
        return getattr(alg, tag)(a, b)
    if tag == "pow":
        base = evaluate(node[1], alg)
        n = node[2]
        if n < 0:
            base = alg.div(alg.const(alg.field.one), base)
            n = -n
        out = alg.const(alg.field.one)
        for _ in range(n):
            out = alg.mul(out, base)
        return out
    if tag == "call":
        arg = evaluate(node[2], alg)
        fname = node[1]
        if fname == "log":
            return alg.log(arg)
        if fname == "exp":
            return alg.exp(arg)
        f = alg.field
        half = f(1) / 2
        if fname in ("cosh", "sinh"):
            sign = 1 if fname == "cosh" else -1
            return alg.add(alg.scale(alg.exp(arg), half),
                           alg.scale(alg.exp(alg.neg(arg)), half * sign))
        iarg = alg.scale(arg, f.i)
        if fname == "cos":
            return alg.add(alg.scale(alg.exp(iarg), half), alg.scale(alg.exp(alg.neg(iarg)), half))
        c = half / f.i
        return alg.add(alg.scale(alg.exp(iarg), c), alg.scale(alg.exp(alg.neg(iarg)), -c))
    raise ParseError(f"unknown node {tag}")


class ExprAlgebra:
    """Evaluate on a matrix of Exprs; leaves map coordinate names to Exprs."""

    def __init__(self, space, entries, leaves=None):
        self.space = space
        self.field = space.field
        self.entries = entries
        self.leaves = leaves

    def const(self, s):
        return self.space.const(s)

    def leaf(self, name):
        if self.leaves is not None:
            if name not in self.leaves:
                raise DomainError(f"recipe refers to coordinate {name} before it is available")
            return self.leaves[name]
        if name not in self.space.index:
            raise ParseError(f"unknown name {name!r} in recipe")
        return self.space.coord(name)

    def entry(self, a, b):
        return self.entries[a][b]

    def neg(self, a):
        return -a

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def scale(self, a, s):
        return a.scale(s)

    def div(self, a, b):
        if b.as_unit() is None:
            raise DomainError(f"division by a non-unit {b}")
        return a / b

    def log(self, a):
        unit = a.as_unit()
        if unit is None or not unit[0].is_one():
            raise DomainError(f"log of {a}, which is not of the form exp(L)")
        lin = unit[1]
        out = self.space.zero()
        for k, v in lin.items:
            out = out + self.space.coord(k).scale(v)
        return out

    def exp(self, a):
        dec = affine_decompose(a)
        if dec is None or not dec[1].is_zero():
            raise DomainError(f"exp of a non-linear argument {a}")
        return self.space.exp(dec[0])


def verify_recipe(recipe: Recipe, G) -> bool:
    try:
        val = evaluate(recipe.ast, ExprAlgebra(G.space, G.matrix))
    except DomainError:
        raise
    return val == G.space.coord(recipe.target)


# -- automatic search ------------------------------------------------------------------

@dataclass
class _Candidate:
    body: str
    value: Expr


def _lin_text(lin: LinForm, names) -> str:
    from .printing import format_linform
    return format_linform(lin, names)


def _entry_candidates(G, depth: int) -> list[_Candidate]:
    n = G.dim
    base = []
    for a in range(n):
        for b in range(n):
            e = G.matrix[a][b]
            if e.is_zero() or e.as_scalar() is not None:
                continue
            base.append(_Candidate(f"E[{a + 1},{b + 1}]", e))
    if depth < 2:
        return base
    out = list(base)
    seen = {c.value for c in base}
    for x, y in combinations(base, 2):
        for op, val in (("+", x.value + y.value), ("-", x.value - y.value), ("*", x.value * y.value)):
            if val.is_zero() or val.as_scalar() is not None or val in seen:
                continue
            seen.add(val)
            out.append(_Candidate(f"({x.body} {op} {y.body})", val))
        for p, q in ((x, y), (y, x)):
            if q.value.as_unit() is not None:
                val = p.value / q.value
                if val.as_scalar() is None and val not in seen:
                    seen.add(val)
                    out.append(_Candidate(f"({p.body}/{q.body})", val))
    return out


def _depends_only_on(e: Expr, allowed: set[int]) -> bool:
    return e.coords_used() <= allowed


def _affine_stage(G, cands, recovered: set[int], names) -> tuple[int, str] | None:
    space = G.space
    for cand in cands:
        e = cand.value
        unknown = e.coords_used() - recovered
        if len(unknown) != 1:
            continue
        k = unknown.pop()
        if k in e.exp_coords() or e.degree_in(k) != 1:
            continue
        alpha = e.diff(k)
        beta = e - space.coord(k) * alpha
        if not (_depends_only_on(alpha, recovered) and _depends_only_on(beta, recovered)):
            continue
        if alpha.as_unit() is None:
            continue
        body = cand.body
        if not beta.is_zero():
            body = f"({body} - ({beta}))"
        if alpha != space.one():
            body = f"{body}/({alpha})"
        return k, body
    return None


def _cramer_stage(G, cands, recovered: set[int]) -> list[tuple[int, str]] | None:
    """Two candidates affine in the same two unrecovered coordinates."""
    space = G.space
    affine = []
    for cand in cands:
        e = cand.value
        unknown = e.coords_used() - recovered
        if len(unknown) != 2:
            continue
        a, b = sorted(unknown)
        if (a in e.exp_coords() or b in e.exp_coords()
                or e.degree_in(a) != 1 or e.degree_in(b) != 1):
            continue
        ca, cb = e.diff(a), e.diff(b)
        beta = e - space.coord(a) * ca - space.coord(b) * cb
        if not all(_depends_only_on(x, recovered) for x in (ca, cb, beta)):
            continue
        affine.append(((a, b), cand, ca, cb, beta))
    for (p, q) in combinations(affine, 2):
        if p[0] != q[0]:
            continue
        (a, b), c1, a11, a12, b1 = p
        _, c2, a21, a22, b2 = q
        det = a11 * a22 - a12 * a21
        if det.as_unit() is None:
            continue
        r1 = f"({c1.body} - ({b1}))" if not b1.is_zero() else c1.body
        r2 = f"({c2.body} - ({b2}))" if not b2.is_zero() else c2.body
        xa = f"(({a22})*{r1} - ({a12})*{r2})/({det})"
        xb = f"(({a11})*{r2} - ({a21})*{r1})/({det})"
        return [(a, xa), (b, xb)]
    return None


def _unit_stage(G, cands, recovered: set[int]) -> list[tuple[int, str]]:
    space = G.space
    field = space.field
    units = []
    seen = set()
    for cand in cands:
        u = cand.value.as_unit()
        if u is None or not u[1].items:
            continue
        s, lin = u
        if lin in seen:
            continue
        seen.add(lin)
        body = f"log({cand.body})" if s.is_one() else f"log({cand.body}/({s}))"
        units.append((body, lin))
    if not units:
        return []
    found = []
    unrec = [k for k in range(space.ncoords) if k not in recovered]
    for k in unrec:
        rows = []
        for j in range(space.ncoords):
            if j in recovered:
                continue
            row = {u: lin.coefficient(j, field) for u, (_, lin) in enumerate(units)}
            row = {u: v for u, v in row.items() if not v.is_zero()}
            if j == k:
                row[CONST] = -field.one
            if row:
                rows.append(row)
        try:
            sol = solve_sparse(rows, list(range(len(units))), field)
        except Exception:
            continue
        coeffs = sol.substitute({}, field)
        total = LinForm()
        parts = []
        for u, c in coeffs.items():
            if c.is_zero():
                continue
            total = total + units[u][1].scale(c)
            parts.append((c, units[u][0]))
        # total = X_k + (recovered coordinates); move those to the other side
        corr = [(j, v) for j, v in total.items if j != k]
        from .printing import _join, mul_safe
        terms = []
        for c, body in parts:
            neg = c.is_negative_looking()
            mag = -c if neg else c
            terms.append(("-" if neg else "+", body if mag.is_one() else f"{mul_safe(str(mag))}*{body}"))
        for j, v in corr:
            w = -v
            neg = w.is_negative_looking()
            mag = -w if neg else w
            name = space.coords[j]
            terms.append(("-" if neg else "+", name if mag.is_one() else f"{mul_safe(str(mag))}*{name}"))
        found.append((k, _join(terms)))
    return found


def find_recipes(G, depth: int = 2, manual: list[Recipe] | None = None) -> list[Recipe]:
    """Staged search; returns verified recipes in recovery order."""
    space = G.space
    names = space.coords
    recipes: list[Recipe] = []
    recovered: set[int] = set()
    manual = list(manual or [])
    for r in manual:
        if r.target not in space.index:
            raise RecipeSearchFailed(f"recipe target {r.target} is not a coordinate")
    cands_by_depth = {1: _entry_candidates(G, 1)}
    if depth >= 2:
        cands_by_depth[2] = _entry_candidates(G, 2)

    def accept(k, body):
        rec = Recipe(names[k], body)
        if not verify_recipe(rec, G):
            return False
        recipes.append(rec)
        recovered.add(k)
        return True

    progress = True
    while len(recovered) < space.ncoords and progress:
        progress = False
        for r in list(manual):
            k = space.index[r.target]
            leaves = {n for n in _names(r.ast)} - set(space.params)
            if all(space.index.get(n, -1) in recovered for n in leaves):
                if not verify_recipe(r, G):
                    raise RecipeSearchFailed(f"manual recipe for {r.target} does not verify")
                recipes.append(r)
                recovered.add(k)
                manual.remove(r)
                progress = True
        if progress:
            continue
        for d in sorted(cands_by_depth):
            cands = cands_by_depth[d]
            hit = _affine_stage(G, cands, recovered, names)
            if hit and accept(*hit):
                progress = True
                break
            found = _unit_stage(G, cands, recovered)
            ok = False
            for k, body in found:
                if accept(k, body):
                    ok = True
            if ok:
                progress = True
                break
            pair = _cramer_stage(G, cands, recovered)
            if pair:
                ok = all(accept(k, body) for k, body in pair)
                if ok:
                    progress = True
                    break
    if len(recovered) < space.ncoords:
        missing = [names[k] for k in range(space.ncoords) if k not in recovered]
        raise RecipeSearchFailed(f"no recipe found for coordinates {missing}")
    return recipes


def _names(node) -> set[str]:
    from .parse import ast_names
    return ast_names(node)
