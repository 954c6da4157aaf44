"""Coproducts of the dual-group coordinates from the matrix group law.

Delta(E_ab) = sum_l E_al (x) E_lb is pushed through each recipe; ``log`` of a
single group-like tensor term exp(L) (x) exp(M) gives L (x) 1 + 1 (x) M.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (DomainError, NonGroupLikeExponent, NonGroupLikeLog, NonInvertibleElement)
from .expr import Expr, Space
from .grouprep import GroupElement
from .recipes import ExprAlgebra, Recipe, evaluate
from .tensor import TensorExpr, TensorMorphism, additive_split, tensor


class TensorAlgebra:
    """Recipe evaluation on tensorized entries; leaves map to known coproducts."""

    def __init__(self, space: Space, G, leaves: dict[str, TensorExpr]):
        self.space = space
        self.field = space.field
        self.G = G
        self.leaves = leaves
        self._entries: dict = {}

    def const(self, s):
        return TensorExpr.unit(self.space, 2).scale(s)

    def leaf(self, name):
        if name not in self.leaves:
            raise DomainError(f"coproduct of {name} requested before it was derived")
        return self.leaves[name]

    def entry(self, a, b):
        key = (a, b)
        if key not in self._entries:
            n = len(self.G)
            out = TensorExpr.zero(self.space, 2)
            for l in range(n):
                x, y = self.G[a][l], self.G[l][b]
                if x.terms and y.terms:
                    out = out + tensor(x, y)
            self._entries[key] = out
        return self._entries[key]

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
        single = b.as_single_term()
        if single is None or any(any(m) for m, _ in single[0]):
            raise DomainError(f"division by a non-unit tensor {b}")
        (l1, l2), c = single
        zm = self.space.zero_mono
        inv = TensorExpr(self.space, 2, {((zm, -l1[1]), (zm, -l2[1])): c.inverse()})
        return a * inv

    def log(self, a):
        single = a.as_single_term()
        if single is None or any(any(m) for m, _ in single[0]) or not single[1].is_one():
            raise NonGroupLikeLog(f"log of a tensor that is not a single group-like term: {a}")
        (l1, l2), _ = single
        out = TensorExpr.zero(self.space, 2)
        one = self.space.one()
        for k, v in l1[1].items:
            out = out + tensor(self.space.coord(k), one).scale(v)
        for k, v in l2[1].items:
            out = out + tensor(one, self.space.coord(k)).scale(v)
        return out

    def exp(self, a):
        split = additive_split(a)
        if split is None:
            raise NonGroupLikeExponent(f"exp of a non-primitive tensor {a}")
        zm = self.space.zero_mono
        return TensorExpr(self.space, 2, {((zm, split[0]), (zm, split[1])): self.field.one})


@dataclass
class CoproductMap:
    space: Space
    images: dict[str, TensorExpr]

    def __post_init__(self):
        self._morphism = None

    @property
    def morphism(self) -> TensorMorphism:
        if self._morphism is None:
            self._morphism = TensorMorphism(self.space, [self.images[c] for c in self.space.coords])
        return self._morphism

    def __getitem__(self, name) -> TensorExpr:
        return self.images[name]

    def apply(self, expr: Expr) -> TensorExpr:
        return self.morphism(expr)

    def is_primitive(self, name) -> bool:
        x = self.space.coord(name)
        return self.images[name] == tensor(x, self.space.one()) + tensor(self.space.one(), x)

    def primitive_flags(self) -> dict[str, bool]:
        return {c: self.is_primitive(c) for c in self.space.coords}

    def check_counit(self) -> dict[str, bool]:
        out = {}
        for c in self.space.coords:
            t = self.images[c]
            x = self.space.coord(c)
            out[c] = t.leg_at_zero(2) == x and t.leg_at_zero(1) == x
        return out

    def coassociativity_defects(self) -> dict[str, TensorExpr]:
        out = {}
        for c in self.space.coords:
            t = self.images[c]
            left = self.morphism.apply_on_leg(t, 1)
            right = self.morphism.apply_on_leg(t, 2)
            out[c] = left - right
        return out

    def check_coassociativity(self) -> dict[str, bool]:
        return {c: d.is_zero() for c, d in self.coassociativity_defects().items()}

    def negate_params(self, names) -> "CoproductMap":
        return CoproductMap(self.space, {c: t.negate_params(names) for c, t in self.images.items()})

    def substitute_params(self, values) -> "CoproductMap":
        out = {}
        for c, t in self.images.items():
            acc = TensorExpr.zero(self.space, 2)
            for legs, coeff in t.terms.items():
                parts = [Expr(self.space, {leg: self.space.field.one}).substitute_params(values)
                         for leg in legs]
                acc = acc + tensor(*parts).scale(coeff.substitute_params(values))
            out[c] = acc
        return CoproductMap(self.space, out)

    def lines(self, fold_trig: bool = False) -> list[str]:
        return [f"Delta({c}) = {self.images[c].format(fold_trig)}" for c in self.space.coords]


def derive_coproduct(G: GroupElement, recipes: list[Recipe]) -> CoproductMap:
    space = G.space
    known: dict[str, TensorExpr] = {}
    alg = TensorAlgebra(space, G.matrix, known)
    for r in recipes:
        known[r.target] = evaluate(r.ast, alg)
    missing = [c for c in space.coords if c not in known]
    if missing:
        raise DomainError(f"no recipe for {missing}")
    return CoproductMap(space, {c: known[c] for c in space.coords})


def counit_values(space: Space) -> dict[str, Expr]:
    """epsilon(X_i) = X_i evaluated at the identity, which is 0 for every coordinate."""
    return {c: space.zero() for c in space.coords}


def derive_antipode(G: GroupElement, recipes: list[Recipe]) -> dict[str, Expr]:
    space = G.space
    try:
        Ginv = G.inverse()
    except Exception as exc:  # pragma: no cover - inverse factors always exist
        raise NonInvertibleElement(str(exc)) from exc
    values: dict[str, Expr] = {}
    alg = ExprAlgebra(space, Ginv, values)
    for r in recipes:
        values[r.target] = evaluate(r.ast, alg)
    return {c: values[c] for c in space.coords}


def antipode_defects(delta: CoproductMap, S: dict[str, Expr]) -> dict[str, Expr]:
    """m o (S (x) id) o Delta (X) - epsilon(X) for every coordinate."""
    space = delta.space
    cache: dict = {}
    out = {}
    for c in space.coords:
        acc = space.zero()
        for (a, b), coeff in delta.images[c].terms.items():
            if a not in cache:
                cache[a] = Expr(space, {a: space.field.one}).substitute(S)
            acc = acc + cache[a] * Expr(space, {b: coeff})
        out[c] = acc
    return out


def leg_factors(t: TensorExpr) -> list[tuple[Expr, Expr]]:
    """Group terms by the right-leg basis element: t = sum_k g_k (x) h_k."""
    space = t.space
    groups: dict = {}
    order = []
    for (a, b), c in t.sorted_terms():
        if b not in groups:
            groups[b] = space.zero()
            order.append(b)
        groups[b] = groups[b] + Expr(space, {a: c})
    return [(groups[b], Expr(space, {b: space.field.one})) for b in order]


def abelian_coproduct(space: Space) -> CoproductMap:
    one = space.one()
    return CoproductMap(space, {c: tensor(space.coord(c), one) + tensor(one, space.coord(c))
                                for c in space.coords})


__all__ = ["CoproductMap", "derive_coproduct", "derive_antipode", "antipode_defects",
           "counit_values", "leg_factors", "TensorAlgebra"]
