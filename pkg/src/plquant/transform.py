"""Invertible coordinate changes on the dual group.

Brackets move by the chain rule, coproducts by applying Delta to the new
coordinates written in the old ones; both results are then rewritten in the
new coordinates through the inverse map.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .coproduct import CoproductMap
from .errors import InvalidInput
from .expr import Expr, Space
from .plsolver import BracketTable
from .tensor import TensorExpr, tensor


@dataclass
class CoordinateChange:
    """``forward[new]`` is an Expr in ``old``; ``inverse[old]`` is an Expr in ``new``.

    Coordinates missing from a map are carried over unchanged by name.
    """

    old: Space
    new: Space
    forward: dict[str, Expr]
    inverse: dict[str, Expr]

    def __post_init__(self):
        self.forward = {c: self.forward[c] if c in self.forward else _carry(c, self.old)
                        for c in self.new.coords}
        self.inverse = {c: self.inverse[c] if c in self.inverse else _carry(c, self.new)
                        for c in self.old.coords}

    def to_new(self, e: Expr) -> Expr:
        return e.substitute(self.inverse, self.new)

    def to_old(self, e: Expr) -> Expr:
        return e.substitute(self.forward, self.old)

    def round_trip_defects(self) -> dict[str, Expr]:
        out = {}
        for c in self.new.coords:
            d = self.to_new(self.forward[c]) - self.new.coord(c)
            if not d.is_zero():
                out[c] = d
        for c in self.old.coords:
            d = self.to_old(self.inverse[c]) - self.old.coord(c)
            if not d.is_zero():
                out[c] = d
        return out

    def check(self):
        bad = self.round_trip_defects()
        if bad:
            name = next(iter(bad))
            raise InvalidInput(f"coordinate change is not invertible at {name}: defect {bad[name]}")
        return self

    def inverted(self) -> "CoordinateChange":
        return CoordinateChange(self.new, self.old, dict(self.inverse), dict(self.forward))

    def leg_to_new(self, t: TensorExpr) -> TensorExpr:
        out = TensorExpr.zero(self.new, t.rank)
        cache: dict = {}
        for legs, c in t.terms.items():
            factors = []
            for leg in legs:
                if leg not in cache:
                    cache[leg] = self.to_new(t.leg_expr(leg))
                factors.append(cache[leg])
            out = out + tensor(*factors).scale(c)
        return out


def _carry(name: str, space: Space) -> Expr:
    if name not in space.index:
        raise InvalidInput(f"coordinate {name} has no image under the coordinate change")
    return space.coord(name)


def identity_change(space: Space) -> CoordinateChange:
    return CoordinateChange(space, space, {}, {})


def transport_bracket(Q: BracketTable, phi: CoordinateChange) -> BracketTable:
    """{X'_a, X'_b} = sum_ij d_i phi_a d_j phi_b Q_ij, rewritten in the new coordinates."""
    old = phi.old
    grads = {}
    for c in phi.new.coords:
        f = phi.forward[c]
        grads[c] = {k: f.diff(k) for k in sorted(f.coords_used())}
    entries = {}
    for a, b in combinations(range(phi.new.ncoords), 2):
        ga, gb = grads[phi.new.coords[a]], grads[phi.new.coords[b]]
        acc = old.zero()
        for i, da in ga.items():
            for j, db in gb.items():
                if i == j:
                    continue
                q = Q.get(i, j)
                if q.terms:
                    acc = acc + da * db * q
        if acc.terms:
            entries[(a, b)] = phi.to_new(acc)
    return BracketTable(phi.new, entries)


def transport_coproduct(delta: CoproductMap, phi: CoordinateChange) -> CoproductMap:
    images = {}
    for c in phi.new.coords:
        images[c] = phi.leg_to_new(delta.apply(phi.forward[c]))
    return CoproductMap(phi.new, images)


def transport(Q: BracketTable, delta: CoproductMap, phi: CoordinateChange):
    return transport_bracket(Q, phi), transport_coproduct(delta, phi)


def check_flip_symmetry(delta: CoproductMap, negated_params) -> dict[str, bool]:
    """Per coordinate: flip(Delta X) with the listed parameters negated equals Delta X."""
    names = list(negated_params)
    return {c: delta[c].flip().negate_params(names) == delta[c] for c in delta.space.coords}


# -- ordering-ambiguity certificate -------------------------------------------------------

def _factors(key) -> list[int]:
    """Coordinates multiplied together in one term: monomial letters and exponent coordinates."""
    mono, lin = key
    out = [k for k, e in enumerate(mono) if e]
    out.extend(k for k, _ in lin.items if k not in out)
    return out


def noncommuting_pairs(Q: BracketTable) -> set[tuple[int, int]]:
    n = Q.space.ncoords
    return {(i, j) for i, j in combinations(range(n), 2) if Q.get(i, j).terms}


def ambiguity_witnesses(Q: BracketTable, delta: CoproductMap | None = None) -> list[str]:
    """Terms that multiply two coordinates with a nonzero mutual bracket.

    A term with no witness has a product whose factors all Poisson-commute, so
    its quantization is independent of the ordering chosen.
    """
    space = Q.space
    names = space.coords
    bad = noncommuting_pairs(Q)
    out = []

    def scan(label, keys):
        for key in keys:
            fs = sorted(_factors(key))
            for i, j in combinations(fs, 2):
                if (i, j) in bad:
                    out.append(f"{label}: {names[i]} and {names[j]} in one term")
                    return

    for (a, b), e in sorted(Q.entries.items()):
        scan(f"{{{names[a]}, {names[b]}}}", [k for k, _ in e.sorted_terms()])
    if delta is not None:
        for c in space.coords:
            legs = [leg for legs, _ in delta[c].sorted_terms() for leg in legs]
            scan(f"Delta({c})", legs)
    return out


def is_ambiguity_free(Q: BracketTable, delta: CoproductMap | None = None) -> bool:
    return not ambiguity_witnesses(Q, delta)
