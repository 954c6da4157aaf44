"""Canonical commutative expressions: finite sums of
``scalar * coordinate monomial * exp(linear form)``.

Distinct (monomial, exponent) pairs are linearly independent functions, so a
dictionary keyed by that pair with nonzero scalar values is a normal form and
equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import factorial

from .errors import NonLinearExponentSubstitution
from .scalar import Scalar, ScalarField, get_field


class LinForm:
    """Sparse linear form sum_k c_k X_k; ``items`` is sorted by coordinate index."""

    __slots__ = ("items", "_hash")

    def __init__(self, items=()):
        self.items = tuple(items)
        self._hash = hash(self.items)

    @classmethod
    def from_dict(cls, coeffs: dict[int, Scalar]) -> "LinForm":
        return cls(sorted((k, v) for k, v in coeffs.items() if not v.is_zero()))

    def as_dict(self) -> dict[int, Scalar]:
        return dict(self.items)

    def coefficient(self, idx: int, field: ScalarField) -> Scalar:
        for k, v in self.items:
            if k == idx:
                return v
        return field.zero

    def __add__(self, other: "LinForm") -> "LinForm":
        if not other.items:
            return self
        if not self.items:
            return other
        d = dict(self.items)
        for k, v in other.items:
            if k in d:
                s = d[k] + v
                if s.is_zero():
                    del d[k]
                else:
                    d[k] = s
            else:
                d[k] = v
        return LinForm(sorted(d.items()))

    def __neg__(self):
        return LinForm((k, -v) for k, v in self.items)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s: Scalar) -> "LinForm":
        if s.is_zero():
            return ZERO_LIN
        return LinForm((k, v * s) for k, v in self.items)

    def __bool__(self):
        return bool(self.items)

    def __eq__(self, other):
        return isinstance(other, LinForm) and self.items == other.items

    def __hash__(self):
        return self._hash

    def coords(self) -> set[int]:
        return {k for k, _ in self.items}

    def sort_key(self):
        return tuple((k, v.sort_key()) for k, v in self.items)

    def __repr__(self):
        return f"LinForm({self.items})"


ZERO_LIN = LinForm()


def _mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True, eq=False)
class Space:
    """Parameters and coordinates shared by a family of expressions."""

    params: tuple[str, ...]
    coords: tuple[str, ...]
    field: ScalarField = dc_field(init=False, repr=False, compare=False)
    index: dict = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        clash = set(self.params) & set(self.coords)
        if clash:
            raise ValueError(f"names used both as parameter and coordinate: {sorted(clash)}")
        object.__setattr__(self, "field", get_field(tuple(self.params)))
        object.__setattr__(self, "index", {c: k for k, c in enumerate(self.coords)})

    def __reduce__(self):
        return (get_space, (self.params, self.coords))

    @property
    def ncoords(self) -> int:
        return len(self.coords)

    @property
    def zero_mono(self) -> tuple:
        return (0,) * len(self.coords)

    def scalar(self, value) -> Scalar:
        return self.field(value)

    def param(self, name: str) -> Scalar:
        return self.field.param(name)

    def zero(self) -> "Expr":
        return Expr(self, {})

    def one(self) -> "Expr":
        return self.const(self.field.one)

    def const(self, s) -> "Expr":
        s = self.field(s)
        if s.is_zero():
            return Expr(self, {})
        return Expr(self, {(self.zero_mono, ZERO_LIN): s})

    def coord(self, name_or_idx) -> "Expr":
        idx = name_or_idx if isinstance(name_or_idx, int) else self.index[name_or_idx]
        mono = [0] * len(self.coords)
        mono[idx] = 1
        return Expr(self, {(tuple(mono), ZERO_LIN): self.field.one})

    def exp(self, lin: LinForm, coeff=None) -> "Expr":
        coeff = self.field.one if coeff is None else self.field(coeff)
        return Expr(self, {(self.zero_mono, lin): coeff})

    def linform(self, coeffs: dict) -> LinForm:
        out = {}
        for k, v in coeffs.items():
            idx = k if isinstance(k, int) else self.index[k]
            out[idx] = self.field(v)
        return LinForm.from_dict(out)

    def term(self, coeff, mono, lin=ZERO_LIN) -> "Expr":
        coeff = self.field(coeff)
        if coeff.is_zero():
            return self.zero()
        return Expr(self, {(tuple(mono), lin): coeff})


@lru_cache(maxsize=None)
def get_space(params: tuple[str, ...], coords: tuple[str, ...]) -> Space:
    return Space(tuple(params), tuple(coords))


class Expr:
    """Immutable canonical expression.  ``terms`` maps (monomial, LinForm) -> Scalar."""

    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space: Space, terms: dict):
        self.space = space
        self.terms = terms
        self._hash = None

    # -- ring operations -----------------------------------------------------------
    def _check(self, other):
        if isinstance(other, Expr):
            if other.space is not self.space:
                raise ValueError("expressions from different spaces")
            return other
        if isinstance(other, Scalar) or isinstance(other, (int,)) or _is_fraction(other):
            return self.space.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            if k in out:
                s = out[k] + v
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = v
        return Expr(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return Expr(self.space, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, Scalar) or isinstance(other, int) or _is_fraction(other):
            return self.scale(self.space.field(other))
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Expr(self.space, {})
        out: dict = {}
        for (m1, l1), c1 in self.terms.items():
            for (m2, l2), c2 in other.terms.items():
                key = (_mono_mul(m1, m2), l1 + l2)
                c = c1 * c2
                if key in out:
                    s = out[key] + c
                    if s.is_zero():
                        del out[key]
                    else:
                        out[key] = s
                else:
                    out[key] = c
        return Expr(self.space, out)

    __rmul__ = __mul__

    def scale(self, s: Scalar) -> "Expr":
        if s.is_zero():
            return Expr(self.space, {})
        if s.is_one():
            return self
        return Expr(self.space, {k: v * s for k, v in self.terms.items()})

    def __truediv__(self, other):
        if isinstance(other, Scalar) or isinstance(other, int) or _is_fraction(other):
            return self.scale(self.space.field(other).inverse())
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.unit_inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.unit_inverse() ** (-n)
        out = self.space.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def unit_inverse(self) -> "Expr":
        """Inverse of a single term s*exp(L) (the units of this algebra)."""
        unit = self.as_unit()
        if unit is None:
            raise ZeroDivisionError(f"expression is not invertible in the algebra: {self}")
        s, lin = unit
        return self.space.exp(-lin, s.inverse())

    # -- structure queries -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def as_scalar(self) -> Scalar | None:
        if not self.terms:
            return self.space.field.zero
        if len(self.terms) != 1:
            return None
        (m, l), c = next(iter(self.terms.items()))
        if any(m) or l.items:
            return None
        return c

    def as_unit(self) -> tuple[Scalar, LinForm] | None:
        """(s, L) when the expression equals s*exp(L) with no coordinate monomial."""
        if len(self.terms) != 1:
            return None
        (m, l), c = next(iter(self.terms.items()))
        if any(m):
            return None
        return c, l

    def coords_used(self) -> set[int]:
        out = set()
        for m, l in self.terms:
            out.update(k for k, e in enumerate(m) if e)
            out.update(l.coords())
        return out

    def exp_coords(self) -> set[int]:
        out = set()
        for _, l in self.terms:
            out.update(l.coords())
        return out

    def mono_coords(self) -> set[int]:
        out = set()
        for m, _ in self.terms:
            out.update(k for k, e in enumerate(m) if e)
        return out

    def degree_in(self, idx: int) -> int:
        return max((m[idx] for m, _ in self.terms), default=0)

    def __eq__(self, other):
        if isinstance(other, Expr):
            return self.space is other.space and self.terms == other.terms
        if isinstance(other, (int, Scalar)) or _is_fraction(other):
            return self == self.space.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: term_sort_key(kv[0]))

    def leading_coefficient(self) -> Scalar:
        return self.sorted_terms()[0][1]

    def normalized(self) -> "Expr":
        """Scalar multiple with leading coefficient 1 (used for dedup up to scalars)."""
        if not self.terms:
            return self
        return self.scale(self.leading_coefficient().inverse())

    # -- calculus ----------------------------------------------------------------
    def diff(self, x) -> "Expr":
        idx = x if isinstance(x, int) else self.space.index[x]
        field = self.space.field
        out: dict = {}

        def acc(key, c):
            if key in out:
                s = out[key] + c
                if s.is_zero():
                    del out[key]
                else:
                    out[key] = s
            elif not c.is_zero():
                out[key] = c

        for (m, l), c in self.terms.items():
            e = m[idx]
            if e:
                nm = m[:idx] + (e - 1,) + m[idx + 1:]
                acc((nm, l), c * e)
            lc = l.coefficient(idx, field)
            if not lc.is_zero():
                acc((m, l), c * lc)
        return Expr(self.space, out)

    def value_at_zero(self) -> Scalar:
        field = self.space.field
        out = field.zero
        for (m, _), c in self.terms.items():
            if not any(m):
                out = out + c
        return out

    def gradient_at_zero(self) -> dict[int, Scalar]:
        """First-order Taylor coefficients at X = 0."""
        field = self.space.field
        out: dict[int, Scalar] = {}
        for (m, l), c in self.terms.items():
            deg = sum(m)
            if deg == 0:
                for k, v in l.items:
                    out[k] = out.get(k, field.zero) + c * v
            elif deg == 1:
                k = next(i for i, e in enumerate(m) if e)
                out[k] = out.get(k, field.zero) + c
        return {k: v for k, v in out.items() if not v.is_zero()}

    def linear_part(self) -> "Expr":
        g = self.gradient_at_zero()
        out = self.space.zero()
        for k, v in sorted(g.items()):
            out = out + self.space.coord(k).scale(v)
        return out

    # -- substitution --------------------------------------------------------------
    def substitute(self, mapping: dict, target: Space | None = None) -> "Expr":
        """Compose with coordinate images.  ``mapping`` keys are coordinate names or
        indices of this space; values are Exprs in ``target`` (default: same space).
        Coordinates appearing in exponents must map to affine-linear images."""
        target = target or self.space
        images: list[Expr] = []
        for k, name in enumerate(self.space.coords):
            img = mapping.get(name, mapping.get(k))
            if img is None:
                if target is self.space:
                    img = self.space.coord(k)
                elif name in target.index:
                    img = target.coord(name)
                else:
                    img = None
            images.append(img)
        return substitute_images(self, images, target)

    def convert(self, target: Space) -> "Expr":
        """Re-express in another space by coordinate/parameter name."""
        if target is self.space:
            return self
        return self.substitute({}, target)

    def negate_params(self, names) -> "Expr":
        out = {}
        for (m, l), c in self.terms.items():
            nl = LinForm((k, v.negate_params(names)) for k, v in l.items)
            key = (m, nl)
            nc = c.negate_params(names)
            if key in out:
                s = out[key] + nc
                if s.is_zero():
                    del out[key]
                else:
                    out[key] = s
            else:
                out[key] = nc
        return Expr(self.space, out)

    def substitute_params(self, values: dict[str, Scalar]) -> "Expr":
        out = self.space.zero()
        for (m, l), c in self.terms.items():
            nl = LinForm.from_dict({k: v.substitute_params(values) for k, v in l.items})
            out = out + self.space.term(c.substitute_params(values), m, nl)
        return out

    # -- display -------------------------------------------------------------------
    def __str__(self):
        from .printing import format_expr
        return format_expr(self)

    def __repr__(self):
        return f"Expr({self})"

    def format(self, fold_trig: bool = False) -> str:
        from .printing import format_expr
        return format_expr(self, fold_trig=fold_trig)


def _is_fraction(x) -> bool:
    from fractions import Fraction
    return isinstance(x, Fraction)


def term_sort_key(key):
    m, l = key
    return (l.sort_key(), -sum(m), tuple(-e for e in m))


def affine_decompose(img: "Expr") -> tuple[LinForm, Scalar] | None:
    """Split an affine-linear expression into (linear form, constant)."""
    lin: dict[int, Scalar] = {}
    const = img.space.field.zero
    for (m, l), c in img.terms.items():
        if l.items:
            return None
        deg = sum(m)
        if deg == 0:
            const = const + c
        elif deg == 1:
            k = next(i for i, e in enumerate(m) if e)
            lin[k] = c
        else:
            return None
    return LinForm.from_dict(lin), const


def substitute_images(expr: Expr, images: list, target: Space) -> Expr:
    field = target.field
    if target.field is not expr.space.field:
        conv = target.field.convert
    else:
        conv = None
    affine_cache: dict[int, tuple] = {}
    power_cache: dict[tuple[int, int], Expr] = {}
    out = target.zero()

    def power(k, e):
        key = (k, e)
        if key not in power_cache:
            if images[k] is None:
                raise ValueError(f"coordinate {expr.space.coords[k]!r} has no image in target space")
            power_cache[key] = images[k] ** e
        return power_cache[key]

    for (m, l), c in expr.terms.items():
        cc = conv(c) if conv else c
        term = target.const(cc)
        for k, e in enumerate(m):
            if e:
                term = term * power(k, e)
        if l.items:
            lin_total: dict[int, Scalar] = {}
            const_total = field.zero
            for k, v in l.items:
                if k not in affine_cache:
                    if images[k] is None:
                        raise ValueError(f"coordinate {expr.space.coords[k]!r} has no image")
                    dec = affine_decompose(images[k])
                    if dec is None:
                        raise NonLinearExponentSubstitution(
                            f"coordinate {expr.space.coords[k]} occurs in an exponent but its image "
                            f"{images[k]} is not affine-linear")
                    affine_cache[k] = dec
                lk, ck = affine_cache[k]
                vv = conv(v) if conv else v
                for j, w in lk.items:
                    lin_total[j] = lin_total.get(j, field.zero) + vv * w
                const_total = const_total + vv * ck
            if not const_total.is_zero():
                raise NonLinearExponentSubstitution(
                    f"substitution produces exp of a nonzero constant ({const_total}), "
                    "which is outside the algebra")
            term = term * target.exp(LinForm.from_dict(lin_total))
        out = out + term
    return out


def exp_series_terms(n: int):
    """Coefficients 1/k! for k = 0..n."""
    from fractions import Fraction
    return [Fraction(1, factorial(k)) for k in range(n + 1)]
