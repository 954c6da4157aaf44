"""Truncated Laurent/Taylor expansion of expressions around parameters = 0.

Keys of a :class:`ParamSeries` are ``(param exponents, coordinate monomial,
param-free exponent)``.  Exponentials whose argument has a parameter-free part
keep that part as an opaque atom; only the parameter-dependent part is expanded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import NotSeriesExpandable, PoleAtOrigin
from .expr import ZERO_LIN, Expr, LinForm, Space
from .scalar import QI, Scalar, _fmpq_to_fraction


def _add_into(out: dict, key, val: QI):
    if key in out:
        s = out[key] + val
        if s:
            out[key] = s
        else:
            del out[key]
    elif val:
        out[key] = val


def _tadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mul_trunc(a: dict, b: dict, order: int) -> dict:
    """Product of {(pexp, cmono): QI} dicts keeping total param degree <= order."""
    out: dict = {}
    for (pa, ma), va in a.items():
        da = sum(pa)
        for (pb, mb), vb in b.items():
            if da + sum(pb) > order:
                continue
            _add_into(out, (_tadd(pa, pb), _tadd(ma, mb)), va * vb)
    return out


def _poly_dict(re, im, ncoords) -> dict:
    zero = (0,) * ncoords
    out: dict = {}
    for mono, c in re.terms():
        _add_into(out, (tuple(mono), zero), QI(_fmpq_to_fraction(c)))
    for mono, c in im.terms():
        _add_into(out, (tuple(mono), zero), QI(0, _fmpq_to_fraction(c)))
    return out


def _split_den(den, nparams):
    """den = monomial * rest with rest(0) != 0."""
    monos = den.monoms()
    shift = tuple(min(m[k] for m in monos) for k in range(nparams))
    terms = {}
    for mono, c in den.terms():
        terms[tuple(m - s for m, s in zip(mono, shift))] = _fmpq_to_fraction(c)
    return shift, terms


def _inverse_series(terms: dict, nparams, ncoords, order) -> dict:
    zero_p = (0,) * nparams
    zero_c = (0,) * ncoords
    d0 = terms.get(zero_p)
    if not d0:
        raise PoleAtOrigin("denominator vanishes at the origin")
    rest = {(p, zero_c): QI(-c / d0) for p, c in terms.items() if p != zero_p}
    out = {(zero_p, zero_c): QI(1)}
    power = dict(out)
    for _ in range(order):
        power = _mul_trunc(power, rest, order)
        if not power:
            break
        for k, v in power.items():
            _add_into(out, k, v)
    inv = QI(Fraction(1) / d0)
    return {k: v * inv for k, v in out.items()}


def _exp_series(lin1: dict, nparams, ncoords, order) -> dict:
    zero = ((0,) * nparams, (0,) * ncoords)
    out = {zero: QI(1)}
    power = {zero: QI(1)}
    for k in range(1, order + 1):
        power = _mul_trunc(power, lin1, order)
        if not power:
            break
        inv = QI(Fraction(1, factorial(k)))
        for key, v in power.items():
            _add_into(out, key, v * inv)
    return out


@dataclass
class ParamSeries:
    space: Space
    order: int
    terms: dict

    def __eq__(self, other):
        return (isinstance(other, ParamSeries) and self.space is other.space
                and self.order == other.order and self.terms == other.terms)

    def __add__(self, other: "ParamSeries") -> "ParamSeries":
        out = dict(self.terms)
        for k, v in other.terms.items():
            _add_into(out, k, v)
        return ParamSeries(self.space, min(self.order, other.order), out)

    def __neg__(self):
        return ParamSeries(self.space, self.order, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "ParamSeries") -> "ParamSeries":
        order = min(self.order, other.order)
        out: dict = {}
        for (pa, ma, la), va in self.terms.items():
            for (pb, mb, lb), vb in other.terms.items():
                p = _tadd(pa, pb)
                if sum(p) > order:
                    continue
                _add_into(out, (p, _tadd(ma, mb), la + lb), va * vb)
        return ParamSeries(self.space, order, out)

    def is_zero(self) -> bool:
        return not self.terms

    def part(self, degree: int) -> "ParamSeries":
        return ParamSeries(self.space, self.order,
                           {k: v for k, v in self.terms.items() if sum(k[0]) == degree})

    def truncate(self, order: int) -> "ParamSeries":
        return ParamSeries(self.space, order,
                           {k: v for k, v in self.terms.items() if sum(k[0]) <= order})

    def to_expr(self) -> Expr:
        """Back to an Expr (parameter powers become scalar coefficients)."""
        field = self.space.field
        out = self.space.zero()
        for (p, m, l), v in self.terms.items():
            s = field.rational(v.re, v.im)
            for k, e in enumerate(p):
                if e:
                    s = s * field.param(field.params[k]) ** e
            out = out + self.space.term(s, m, l)
        return out

    def __str__(self):
        return str(self.to_expr())


def _split_linform(lin: LinForm, space: Space):
    """(parameter-free part, parameter-dependent part as a series dict)."""
    n = space.ncoords
    free = {}
    dep: dict = {}
    for k, c in lin.items:
        if not c.is_polynomial():
            raise NotSeriesExpandable(f"exponent coefficient {c} is not polynomial in the parameters")
        mono = tuple(1 if j == k else 0 for j in range(n))
        for pm, v in _poly_dict(c.re, c.im, 0).items():
            p = pm[0]
            if sum(p) == 0:
                free[k] = v
            else:
                _add_into(dep, (p, mono), v)
    return free, dep


def series_in_params(expr: Expr, order: int) -> ParamSeries:
    """Expand to total parameter degree ``order``.

    Every term is expanded far enough that all Laurent coefficients of total
    degree up to ``order + P`` are exact, P being the largest pole order of any
    single term; a surviving negative exponent in that range raises PoleAtOrigin.
    """
    space = expr.space
    field = space.field
    nparams = len(space.params)
    ncoords = space.ncoords
    splits = {key: _split_den(c.den, nparams) for key, c in expr.terms.items()}
    max_pole = max((sum(sh) for sh, _ in splits.values()), default=0)
    keep = order + max_pole
    out: dict = {}
    for (mono, lin), c in expr.terms.items():
        shift, den_terms = splits[(mono, lin)]
        work = keep + sum(shift)
        num = _poly_dict(c.re, c.im, ncoords)
        series = _mul_trunc(num, _inverse_series(den_terms, nparams, ncoords, work), work)
        free_lin = ZERO_LIN
        if lin.items:
            free, dep = _split_linform(lin, space)
            free_lin = LinForm.from_dict({k: field.rational(v.re, v.im) for k, v in free.items()})
            if dep:
                series = _mul_trunc(series, _exp_series(dep, nparams, ncoords, work), work)
        for (p, m), v in series.items():
            p2 = tuple(a - b for a, b in zip(p, shift))
            if sum(p2) > keep:
                continue
            _add_into(out, (p2, _tadd(m, mono), free_lin), v)
    for (p, m, l), v in out.items():
        if any(e < 0 for e in p):
            raise PoleAtOrigin(f"pole of order {-min(p)} survives in the parameter expansion")
    return ParamSeries(space, order, {k: v for k, v in out.items() if sum(k[0]) <= order})


def param_limit(expr: Expr) -> Expr:
    """Order-zero part of the parameter expansion, as an expression."""
    return series_in_params(expr, 0).to_expr()
