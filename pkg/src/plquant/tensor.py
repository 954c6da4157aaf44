"""Rank-2 and rank-3 tensor products of the commutative expression algebra.

A basis element of one leg is a ``(monomial, LinForm)`` pair; a tensor term is a
tuple of such pairs.  Multiplication is leg-wise.
"""

from __future__ import annotations

from .errors import NonGroupLikeExponent
from .expr import ZERO_LIN, Expr, LinForm, Space, _mono_mul, term_sort_key


def _acc(out: dict, key, c):
    if key in out:
        s = out[key] + c
        if s.is_zero():
            del out[key]
        else:
            out[key] = s
    elif not c.is_zero():
        out[key] = c


class TensorExpr:
    __slots__ = ("space", "rank", "terms", "_hash")

    def __init__(self, space: Space, rank: int, terms: dict):
        if rank not in (2, 3):
            raise ValueError("tensor rank must be 2 or 3")
        self.space = space
        self.rank = rank
        self.terms = terms
        self._hash = None

    # -- construction -----------------------------------------------------------
    @classmethod
    def zero(cls, space: Space, rank: int = 2) -> "TensorExpr":
        return cls(space, rank, {})

    @classmethod
    def unit(cls, space: Space, rank: int = 2) -> "TensorExpr":
        leg = (space.zero_mono, ZERO_LIN)
        return cls(space, rank, {(leg,) * rank: space.field.one})

    # -- arithmetic ---------------------------------------------------------------
    def _same(self, other: "TensorExpr"):
        if not isinstance(other, TensorExpr):
            return NotImplemented
        if other.space is not self.space or other.rank != self.rank:
            raise ValueError("incompatible tensors")
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return TensorExpr(self.space, self.rank, out)

    def __neg__(self):
        return TensorExpr(self.space, self.rank, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "TensorExpr":
        s = self.space.field(s)
        if s.is_zero():
            return TensorExpr(self.space, self.rank, {})
        return TensorExpr(self.space, self.rank, {k: v * s for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TensorExpr):
            return self.scale(other)
        other = self._same(other)
        out: dict = {}
        for legs1, c1 in self.terms.items():
            for legs2, c2 in other.terms.items():
                key = tuple((_mono_mul(m1, m2), l1 + l2)
                            for (m1, l1), (m2, l2) in zip(legs1, legs2))
                _acc(out, key, c1 * c2)
        return TensorExpr(self.space, self.rank, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        out = TensorExpr.unit(self.space, self.rank)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure ----------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, TensorExpr) and self.space is other.space
                and self.rank == other.rank and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda kv: tuple(term_sort_key(leg) for leg in kv[0]))

    def as_single_term(self):
        if len(self.terms) != 1:
            return None
        return next(iter(self.terms.items()))

    def leg_expr(self, leg_key) -> Expr:
        m, l = leg_key
        return Expr(self.space, {(m, l): self.space.field.one})

    # -- operations -----------------------------------------------------------------
    def flip(self) -> "TensorExpr":
        if self.rank != 2:
            raise ValueError("flip is defined on rank-2 tensors")
        return TensorExpr(self.space, 2, {(b, a): c for (a, b), c in self.terms.items()})

    def negate_params(self, names) -> "TensorExpr":
        out: dict = {}
        for legs, c in self.terms.items():
            key = tuple((m, LinForm((k, v.negate_params(names)) for k, v in l.items))
                        for m, l in legs)
            _acc(out, key, c.negate_params(names))
        return TensorExpr(self.space, self.rank, out)

    def leg_diff(self, leg: int, x) -> "TensorExpr":
        """Derivative with respect to coordinate ``x`` of leg ``leg`` (1-based)."""
        idx = x if isinstance(x, int) else self.space.index[x]
        field = self.space.field
        pos = leg - 1
        out: dict = {}
        for legs, c in self.terms.items():
            m, l = legs[pos]
            e = m[idx]
            if e:
                nm = m[:idx] + (e - 1,) + m[idx + 1:]
                _acc(out, legs[:pos] + ((nm, l),) + legs[pos + 1:], c * e)
            lc = l.coefficient(idx, field)
            if not lc.is_zero():
                _acc(out, legs, c * lc)
        return TensorExpr(self.space, self.rank, out)

    def leg_at_zero(self, leg: int):
        """Set every coordinate of one leg to 0; returns an Expr (rank 2) or rank-2 tensor."""
        pos = leg - 1
        out: dict = {}
        for legs, c in self.terms.items():
            m, _ = legs[pos]
            if any(m):
                continue
            rest = legs[:pos] + legs[pos + 1:]
            key = rest[0] if self.rank == 2 else rest
            _acc(out, key, c)
        if self.rank == 2:
            return Expr(self.space, out)
        return TensorExpr(self.space, 2, out)

    def multiply_legs(self) -> Expr:
        """The multiplication map m: A (x) A -> A."""
        if self.rank != 2:
            raise ValueError("multiply_legs needs a rank-2 tensor")
        out: dict = {}
        for (a, b), c in self.terms.items():
            _acc(out, (_mono_mul(a[0], b[0]), a[1] + b[1]), c)
        return Expr(self.space, out)

    def map_legs(self, maps) -> "TensorExpr":
        """Apply an algebra map (callable Expr -> Expr, or None for identity) on each leg."""
        cache: list[dict] = [dict() for _ in range(self.rank)]
        out = TensorExpr.zero(self.space, self.rank)
        for legs, c in self.terms.items():
            factors = []
            for pos, leg in enumerate(legs):
                f = maps[pos]
                if f is None:
                    factors.append(self.leg_expr(leg))
                    continue
                if leg not in cache[pos]:
                    cache[pos][leg] = f(self.leg_expr(leg))
                factors.append(cache[pos][leg])
            out = out + tensor(*factors).scale(c)
        return out

    def __str__(self):
        from .printing import format_tensor
        return format_tensor(self)

    def format(self, fold_trig: bool = False) -> str:
        from .printing import format_tensor
        return format_tensor(self, fold_trig)

    def __repr__(self):
        return f"TensorExpr({self})"


def tensor(*factors: Expr) -> TensorExpr:
    space = factors[0].space
    rank = len(factors)
    out: dict = {(): space.field.one}
    for f in factors:
        nxt: dict = {}
        for legs, c in out.items():
            for key, v in f.terms.items():
                _acc(nxt, legs + (key,), c * v)
        out = nxt
    return TensorExpr(space, rank, out)


def embed_left(a: Expr) -> TensorExpr:
    return tensor(a, a.space.one())


def embed_right(a: Expr) -> TensorExpr:
    return tensor(a.space.one(), a)


def additive_split(t: TensorExpr):
    """When t = A(x)1 + 1(x)B with A, B linear in the coordinates, return (A, B) LinForms."""
    field = t.space.field
    left: dict[int, object] = {}
    right: dict[int, object] = {}
    unit_leg = (t.space.zero_mono, ZERO_LIN)
    for legs, c in t.terms.items():
        if t.rank != 2:
            return None
        a, b = legs
        for leg, other, store in ((a, b, left), (b, a, right)):
            if other == unit_leg and not leg[1].items and sum(leg[0]) == 1:
                k = next(i for i, e in enumerate(leg[0]) if e)
                store[k] = store.get(k, field.zero) + c
                break
        else:
            return None
    return LinForm.from_dict(left), LinForm.from_dict(right)


class TensorMorphism:
    """Algebra morphism A -> A (x) A determined by the images of the coordinates.

    Exponentials are mapped through the additive images of the coordinates
    appearing in them: exp(L) -> exp(L_left) (x) exp(L_right).
    """

    def __init__(self, space: Space, images: list[TensorExpr]):
        self.space = space
        self.images = images
        self._additive: dict[int, tuple] = {}
        self._powers: dict[tuple[int, int], TensorExpr] = {}
        self._basis: dict = {}

    def additive(self, k: int):
        if k not in self._additive:
            split = additive_split(self.images[k])
            if split is None:
                raise NonGroupLikeExponent(
                    f"coordinate {self.space.coords[k]} appears in an exponent but its image "
                    f"{self.images[k]} is not primitive, so exp() has no group-like image")
            self._additive[k] = split
        return self._additive[k]

    def power(self, k: int, e: int) -> TensorExpr:
        key = (k, e)
        if key not in self._powers:
            self._powers[key] = self.images[k] ** e
        return self._powers[key]

    def basis_image(self, key) -> TensorExpr:
        if key in self._basis:
            return self._basis[key]
        m, l = key
        out = TensorExpr.unit(self.space, 2)
        for k, e in enumerate(m):
            if e:
                out = out * self.power(k, e)
        if l.items:
            left = ZERO_LIN
            right = ZERO_LIN
            for k, v in l.items:
                a, b = self.additive(k)
                left = left + a.scale(v)
                right = right + b.scale(v)
            zm = self.space.zero_mono
            out = out * TensorExpr(self.space, 2, {((zm, left), (zm, right)): self.space.field.one})
        self._basis[key] = out
        return out

    def __call__(self, expr: Expr) -> TensorExpr:
        out: dict = {}
        for key, c in expr.terms.items():
            for legs, v in self.basis_image(key).terms.items():
                _acc(out, legs, c * v)
        return TensorExpr(self.space, 2, out)

    def apply_on_leg(self, t: TensorExpr, leg: int) -> TensorExpr:
        """(D (x) id) t for leg=1 or (id (x) D) t for leg=2, producing rank 3."""
        if t.rank != 2:
            raise ValueError("apply_on_leg needs a rank-2 tensor")
        out: dict = {}
        for (a, b), c in t.terms.items():
            if leg == 1:
                for (x, y), v in self.basis_image(a).terms.items():
                    _acc(out, (x, y, b), c * v)
            else:
                for (x, y), v in self.basis_image(b).terms.items():
                    _acc(out, (a, x, y), c * v)
        return TensorExpr(self.space, 3, out)


def apply_leftmost(delta: TensorMorphism, t: TensorExpr) -> TensorExpr:
    return delta.apply_on_leg(t, 1)


def apply_rightmost(delta: TensorMorphism, t: TensorExpr) -> TensorExpr:
    return delta.apply_on_leg(t, 2)
