"""Exact coefficient field: rational functions in the deformation parameters
with Gaussian-rational coefficients.

A value is stored as ``(re + i*im) / den`` where ``re``, ``im``, ``den`` are
polynomials over Q in the parameters.  ``den`` is real, monic in the deglex
order and coprime to ``gcd(re, im)``, which makes the triple a normal form:
two scalars are equal iff their triples are identical.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import flint


class ScalarField:
    """Q(i)(p_1, ..., p_k) for a fixed tuple of parameter names."""

    def __init__(self, params: tuple[str, ...]):
        self.params = tuple(params)
        self.ctx = flint.fmpq_mpoly_ctx.get(self.params, "deglex")
        self._zero_poly = self.ctx.constant(0)
        self._one_poly = self.ctx.constant(1)
        self.zero = Scalar(self, self._zero_poly, self._zero_poly, self._one_poly)
        self.one = Scalar(self, self._one_poly, self._zero_poly, self._one_poly)
        self.i = Scalar(self, self._zero_poly, self._one_poly, self._one_poly)

    def __repr__(self):
        return f"ScalarField{self.params}"

    def __reduce__(self):
        return (get_field, (self.params,))

    def param(self, name: str) -> "Scalar":
        idx = self.params.index(name)
        return Scalar(self, self.ctx.gens()[idx], self._zero_poly, self._one_poly)

    def rational(self, value, imag=0) -> "Scalar":
        value = Fraction(value)
        imag = Fraction(imag)
        re = self.ctx.constant(flint.fmpq(value.numerator, value.denominator))
        im = self.ctx.constant(flint.fmpq(imag.numerator, imag.denominator))
        return Scalar(self, re, im, self._one_poly)

    def __call__(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field is not self:
                return self.convert(value)
            return value
        return self.rational(value)

    def convert(self, s: "Scalar") -> "Scalar":
        """Embed a scalar from another field by parameter name."""
        if s.field is self:
            return s
        missing = set(s.field.params) - set(self.params)
        for name in missing:
            if _poly_uses(s.re, s.field, name) or _poly_uses(s.im, s.field, name) \
                    or _poly_uses(s.den, s.field, name):
                raise ValueError(f"parameter {name!r} not declared in {self}")
        return Scalar(self, _reembed(s.re, s.field, self), _reembed(s.im, s.field, self),
                      _reembed(s.den, s.field, self))


def _poly_uses(p, field, name):
    idx = field.params.index(name)
    return any(m[idx] for m in p.monoms())


def _reembed(p, src, dst):
    pos = [dst.params.index(n) if n in dst.params else None for n in src.params]
    out = {}
    for mono, c in p.terms():
        new = [0] * len(dst.params)
        for k, e in enumerate(mono):
            if e:
                new[pos[k]] = e
        out[tuple(new)] = c
    return dst.ctx.from_dict(out) if out else dst._zero_poly


@lru_cache(maxsize=None)
def get_field(params: tuple[str, ...]) -> ScalarField:
    return ScalarField(tuple(params))


class Scalar:
    __slots__ = ("field", "re", "im", "den", "_hash")

    def __init__(self, field, re, im, den):
        self.field = field
        self.re = re
        self.im = im
        self.den = den
        self._hash = None

    # -- construction helpers -------------------------------------------------
    @classmethod
    def _make(cls, field, re, im, den):
        if re.is_zero() and im.is_zero():
            return field.zero
        if not den.is_one():
            g = re.gcd(den)
            if not im.is_zero():
                g = g.gcd(im)
            if not g.is_one():
                re = re / g
                im = im / g
                den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                re = re / lc
                im = im / lc
                den = den / lc
        return cls(field, re, im, den)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise ValueError("scalars from different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    # -- predicates ------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def is_one(self) -> bool:
        return self.re.is_one() and self.im.is_zero() and self.den.is_one()

    def is_real(self) -> bool:
        return self.im.is_zero()

    def is_constant(self) -> bool:
        return self.re.is_constant() and self.im.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return Scalar._make(self.field, self.re + other.re, self.im + other.im, self.den)
        return Scalar._make(self.field, self.re * other.den + other.re * self.den,
                            self.im * other.den + other.im * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, -self.re, -self.im, self.den)

    def conjugate(self):
        """Complex conjugate, treating every parameter as real."""
        return Scalar(self.field, self.re, -self.im, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return self.field.zero
        if self.is_one():
            return other
        if other.is_one():
            return self
        if self.im.is_zero() and other.im.is_zero():
            re, im = self.re * other.re, self.im
        elif self.im.is_zero():
            re, im = self.re * other.re, self.re * other.im
        elif other.im.is_zero():
            re, im = self.re * other.re, self.im * other.re
        else:
            re = self.re * other.re - self.im * other.im
            im = self.re * other.im + self.im * other.re
        den = self.den * other.den
        if den.is_one():
            if re.is_zero() and im.is_zero():
                return self.field.zero
            return Scalar(self.field, re, im, den)
        return Scalar._make(self.field, re, im, den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        if self.im.is_zero():
            return Scalar._make(self.field, self.den, self.im, self.re)
        norm = self.re * self.re + self.im * self.im
        return Scalar._make(self.field, self.den * self.re, -(self.den * self.im), norm)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_one():
            return self
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def substitute_params(self, values: dict[str, "Scalar"]) -> "Scalar":
        """Replace parameters by scalars of the same field (e.g. z -> -z)."""
        gens = []
        for idx, name in enumerate(self.field.params):
            if name in values:
                gens.append(values[name])
            else:
                gens.append(self.field.param(name))
        return (_eval_poly(self.re, gens, self.field)
                + self.field.i * _eval_poly(self.im, gens, self.field)) / _eval_poly(self.den, gens, self.field)

    def negate_params(self, names) -> "Scalar":
        names = [n for n in names if n in self.field.params]
        if not names:
            return self
        gens = [(-g if n in names else g) for n, g in zip(self.field.params, self.field.ctx.gens())]
        if not gens:
            return self
        return Scalar._make(self.field, self.re.compose(*gens), self.im.compose(*gens),
                            self.den.compose(*gens))

    def as_fraction_pair(self) -> tuple[Fraction, Fraction]:
        """(real, imaginary) parts of a constant scalar."""
        if not self.is_constant():
            raise ValueError(f"scalar {self} is not constant")
        d = _fmpq_to_fraction(self.den.leading_coefficient())
        re = _fmpq_to_fraction(self.re.leading_coefficient()) if not self.re.is_zero() else Fraction(0)
        im = _fmpq_to_fraction(self.im.leading_coefficient()) if not self.im.is_zero() else Fraction(0)
        return re / d, im / d

    def degree(self) -> int:
        """Crude size measure used for pivot selection."""
        return max(self.re.total_degree(), self.im.total_degree(), 0) + max(self.den.total_degree(), 0)

    def nterms(self) -> int:
        return len(self.re.monoms()) + len(self.im.monoms()) + len(self.den.monoms())

    def is_negative_looking(self) -> bool:
        """True when the printed form would start with a minus sign."""
        if not self.re.is_zero():
            return self.re.leading_coefficient() < 0
        return self.im.leading_coefficient() < 0

    # -- comparison / hashing --------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return (self.field is other.field and self.re == other.re
                    and self.im == other.im and self.den == other.den)
        if isinstance(other, (int, Fraction)):
            return self == self.field.rational(other)
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((str(self.re), str(self.im), str(self.den)))
            self._hash = h
        return h

    def sort_key(self):
        return (self.is_negative_looking(), str(self))

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)})"


def _fmpq_to_fraction(q) -> Fraction:
    q = flint.fmpq(q)
    return Fraction(int(q.p), int(q.q))


def _eval_poly(p, gens, field):
    out = field.zero
    for mono, c in p.terms():
        t = field.rational(_fmpq_to_fraction(c))
        for g, e in zip(gens, mono):
            if e:
                t = t * g ** e
        out = out + t
    return out


# -- printing ------------------------------------------------------------------

def _gauss_terms(re, im):
    """Merge real and imaginary polys into [(mono, Fraction re, Fraction im)] in deglex-descending order."""
    coeffs: dict[tuple, list] = {}
    for mono, c in re.terms():
        coeffs.setdefault(mono, [Fraction(0), Fraction(0)])[0] = _fmpq_to_fraction(c)
    for mono, c in im.terms():
        coeffs.setdefault(mono, [Fraction(0), Fraction(0)])[1] = _fmpq_to_fraction(c)
    keys = sorted(coeffs, key=lambda m: (sum(m), m), reverse=True)
    return [(m, coeffs[m][0], coeffs[m][1]) for m in keys]


def _fmt_fraction(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _fmt_mono(mono, names):
    parts = []
    for name, e in zip(names, mono):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _fmt_poly(terms, names) -> str:
    """Signed sum of monomials; returns text starting with '-' when leading sign negative."""
    out = []
    for mono, a, b in terms:
        m = _fmt_mono(mono, names)
        if b == 0:
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if m:
                body = m if mag == 1 else f"{_fmt_fraction(mag)}*{m}"
            else:
                body = _fmt_fraction(mag)
        elif a == 0:
            sign = "-" if b < 0 else "+"
            mag = abs(b)
            c = "i" if mag == 1 else f"{_fmt_fraction(mag)}*i"
            body = f"{c}*{m}" if m else c
        else:
            sign = "+"
            im_sign = "-" if b < 0 else "+"
            im_mag = abs(b)
            im_txt = "i" if im_mag == 1 else f"{_fmt_fraction(im_mag)}*i"
            c = f"({_fmt_fraction(a)}{im_sign}{im_txt})"
            body = f"{c}*{m}" if m else c
        out.append((sign, body))
    text = ""
    for k, (sign, body) in enumerate(out):
        if k == 0:
            text = ("-" if sign == "-" else "") + body
        else:
            text += f" {sign} {body}"
    return text


def format_scalar(s: Scalar) -> str:
    names = s.field.params
    if s.is_zero():
        return "0"
    if s.den.is_one():
        return _fmt_poly(_gauss_terms(s.re, s.im), names)
    # clear rational content of the numerator into the denominator for display
    lcm = 1
    for _, a, b in _gauss_terms(s.re, s.im):
        for f in (a, b):
            lcm = lcm * f.denominator // _gcd(lcm, f.denominator)
    scale = flint.fmpq(lcm)
    num_terms = _gauss_terms(s.re * scale, s.im * scale)
    den_terms = _gauss_terms(s.den * scale, s.field._zero_poly)
    num = _fmt_poly(num_terms, names)
    den = _fmt_poly(den_terms, names)
    if len(num_terms) > 1 or (num_terms[0][1] != 0 and num_terms[0][2] != 0):
        num = f"({num})"
    bare = (len(den_terms) == 1 and den_terms[0][1] == 1
            and sum(1 for e in den_terms[0][0] if e) == 1)
    return f"{num}/{den}" if bare else f"{num}/({den})"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class QI:
    """Gaussian rational a + b*i with exact Fraction parts (parameter-free coefficients)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, o):
        if not isinstance(o, QI):
            o = QI(o)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, o):
        if not isinstance(o, QI):
            o = QI(o)
        return QI(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        if not isinstance(o, QI):
            o = QI(o)
        if not self.im and not o.im:
            return QI(self.re * o.re)
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        return QI(self.re / n, -self.im / n)

    def __truediv__(self, o):
        if not isinstance(o, QI):
            o = QI(o)
        return self * o.inverse()

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if not isinstance(o, QI):
            try:
                o = QI(o)
            except (TypeError, ValueError):
                return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if not self.im:
            return _fmt_fraction(self.re)
        if not self.re:
            return "i" if self.im == 1 else ("-i" if self.im == -1 else f"{_fmt_fraction(self.im)}*i")
        sign = "-" if self.im < 0 else "+"
        mag = abs(self.im)
        return f"({_fmt_fraction(self.re)}{sign}{'i' if mag == 1 else _fmt_fraction(mag) + '*i'})"

    __repr__ = __str__

    @classmethod
    def from_scalar(cls, s: Scalar) -> "QI":
        re, im = s.as_fraction_pair()
        return cls(re, im)
