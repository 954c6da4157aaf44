"""Order-truncated noncommutative check of the quantized Poisson-Hopf algebra.

Coordinates become noncommuting letters, Poisson brackets become commutators
and every expression is expanded in the deformation parameters up to a fixed
total degree.  Words are kept in normal order (ascending in a fixed alphabet)
by the rewriting  b a -> a b - [a, b]  for a < b.  Hopf axioms are then
compared term by term in the truncated tensor algebra.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from .coproduct import CoproductMap
from .errors import AmbiguousOrdering, FuelExhausted, NotSeriesExpandable, PoleAtOrigin
from .expr import Expr, Space
from .plsolver import BracketTable
from .scalar import QI
from .series import _split_den, series_in_params
from .transform import ambiguity_witnesses

Word = tuple  # letters are coordinate indices of the space
DEFAULT_FUEL = 2_000_000


def _acc(out: dict, key, val):
    if key in out:
        s = out[key] + val
        if s:
            out[key] = s
        else:
            del out[key]
    elif val:
        out[key] = val


def _padd(a, b):
    return tuple(x + y for x, y in zip(a, b))


# -- series containers ------------------------------------------------------------------

@dataclass(frozen=True)
class NCSeries:
    """sum of coefficient * params^p * word, truncated at total parameter degree ``order``."""

    order: int
    terms: dict  # (param exponents, word) -> QI

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "NCSeries") -> "NCSeries":
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return NCSeries(min(self.order, other.order), out)

    def __neg__(self):
        return NCSeries(self.order, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def lowest_degree(self) -> int | None:
        return min((sum(p) for p, _ in self.terms), default=None)

    def part(self, degree: int) -> "NCSeries":
        return NCSeries(self.order, {k: v for k, v in self.terms.items() if sum(k[0]) == degree})

    def format(self, names, params) -> str:
        return _format_terms(self.terms, lambda w: _word_text(w, names), params)


@dataclass(frozen=True)
class NCTensor:
    """Rank-k tensor of words; legs are written side by side and commute with each other."""

    order: int
    rank: int
    terms: dict  # (param exponents, (word, ..., word)) -> QI

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "NCTensor") -> "NCTensor":
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return NCTensor(min(self.order, other.order), self.rank, out)

    def __neg__(self):
        return NCTensor(self.order, self.rank, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def lowest_degree(self) -> int | None:
        return min((sum(p) for p, _ in self.terms), default=None)

    def format(self, names, params) -> str:
        return _format_terms(self.terms,
                             lambda legs: " (x) ".join(_word_text(w, names) for w in legs), params)


def _word_text(w, names) -> str:
    if not w:
        return "1"
    out = []
    k = 0
    while k < len(w):
        j = k
        while j < len(w) and w[j] == w[k]:
            j += 1
        out.append(names[w[k]] + (f"^{j - k}" if j - k > 1 else ""))
        k = j
    return "*".join(out)


def _format_terms(terms, body, params) -> str:
    if not terms:
        return "0"
    parts = []
    for (p, w), v in sorted(terms.items(), key=lambda kv: (sum(kv[0][0]), kv[0][0], kv[0][1])):
        pm = "*".join(n + (f"^{e}" if e > 1 else "") for n, e in zip(params, p) if e)
        parts.append((v, pm, body(w)))
    out = []
    for v, pm, text in parts:
        coeff = str(v)
        neg = coeff.startswith("-")
        if neg:
            coeff = coeff[1:]
        if " " in coeff or ("i" in coeff and coeff not in ("i",)):
            coeff = f"({coeff})"
        factors = [f for f in (coeff if coeff != "1" else "", pm, text if text != "1" or not (pm or coeff != "1") else "") if f]
        s = "*".join(factors) if factors else "1"
        out.append(("- " if neg else "+ ") + s)
    text = " ".join(out)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


# -- rewriting -----------------------------------------------------------------------------

class Rewriter:
    """Normal ordering modulo [X_a, X_b] = q_ab with all corrections truncated at ``order``."""

    def __init__(self, nparams: int, rank: dict, relations: dict, order: int,
                 fuel: int = DEFAULT_FUEL, rng: random.Random | None = None):
        self.nparams = nparams
        self.rank = rank
        self.relations = relations   # (a, b) with rank[a] < rank[b] -> {(p, word): QI}
        self.order = order
        self.fuel = fuel
        self.rng = rng
        self.steps = 0
        self._memo: dict = {}
        self.zero_p = (0,) * nparams

    def _descents(self, w):
        r = self.rank
        return [i for i in range(len(w) - 1) if r[w[i]] > r[w[i + 1]]]

    def word(self, w: Word, budget: int) -> dict:
        """Normal form of a single word as {(p, word): QI} with param degree <= budget."""
        key = (w, budget)
        if self.rng is None and key in self._memo:
            return self._memo[key]
        desc = self._descents(w)
        if not desc:
            out = {(self.zero_p, w): QI(1)}
        else:
            self.steps += 1
            if self.steps > self.fuel:
                raise FuelExhausted(f"normal ordering exceeded {self.fuel} rewrite steps")
            i = self.rng.choice(desc) if self.rng is not None else desc[0]
            b, a = w[i], w[i + 1]           # b > a in the alphabet
            head, tail = w[:i], w[i + 2:]
            out = dict(self.word(head + (a, b) + tail, budget))
            for (p, u), c in self.relations.get((a, b), {}).items():
                d = sum(p)
                if d > budget:
                    continue
                # b a = a b - [a, b]
                for (p2, u2), c2 in self.word(head + u + tail, budget - d).items():
                    _acc(out, (_padd(p, p2), u2), -c * c2)
        if self.rng is None:
            self._memo[key] = out
        return out

    def series(self, terms: dict, budget: int | None = None) -> dict:
        budget = self.order if budget is None else budget
        out: dict = {}
        for (p, w), c in terms.items():
            d = sum(p)
            if d > budget:
                continue
            for (p2, u), c2 in self.word(w, budget - d).items():
                _acc(out, (_padd(p, p2), u), c * c2)
        return out

    def mul(self, a: dict, b: dict) -> dict:
        raw: dict = {}
        for (pa, wa), ca in a.items():
            da = sum(pa)
            for (pb, wb), cb in b.items():
                if da + sum(pb) > self.order:
                    continue
                _acc(raw, (_padd(pa, pb), wa + wb), ca * cb)
        return self.series(raw)

    def tensor_normalize(self, terms: dict) -> dict:
        out: dict = {}
        for (p, legs), c in terms.items():
            d = sum(p)
            if d > self.order:
                continue
            partial = {(p, ()): c}
            for w in legs:
                nxt: dict = {}
                for (pp, done), cc in partial.items():
                    for (p2, u), c2 in self.word(w, self.order - sum(pp)).items():
                        _acc(nxt, (_padd(pp, p2), done + (u,)), cc * c2)
                partial = nxt
            for k, v in partial.items():
                _acc(out, k, v)
        return out

    def tensor_mul(self, a: dict, b: dict) -> dict:
        raw: dict = {}
        for (pa, la), ca in a.items():
            da = sum(pa)
            for (pb, lb), cb in b.items():
                if da + sum(pb) > self.order:
                    continue
                legs = tuple(x + y for x, y in zip(la, lb))
                _acc(raw, (_padd(pa, pb), legs), ca * cb)
        return self.tensor_normalize(raw)


# -- from commutative expansions to words -----------------------------------------------

def _mono_letters(mono, rank, descending=False) -> Word:
    letters = [k for k, e in enumerate(mono) for _ in range(e)]
    return tuple(sorted(letters, key=lambda k: rank[k], reverse=descending))


def _symmetrized(word: Word) -> dict:
    perms = set(permutations(word))
    inv = QI(Fraction(1, len(perms)))
    return {w: inv for w in sorted(perms)}


def _words_of(mono, rank, rule) -> dict:
    if rule == "symmetrized":
        return _symmetrized(_mono_letters(mono, rank))
    return {_mono_letters(mono, rank, descending=(rule == "descending")): QI(1)}


def _expr_series(e: Expr, order: int):
    s = series_in_params(e, order)
    for (_, _, lin) in s.terms:
        if lin.items:
            raise NotSeriesExpandable("exponential with a parameter-free argument cannot be "
                                      "expanded in the deformation parameters")
    return s


def expr_to_words(e: Expr, order: int, rank: dict, rule: str = "ascending") -> dict:
    """{(p, word): QI} before normal ordering."""
    out: dict = {}
    for (p, m, _), v in _expr_series(e, order).terms.items():
        for w, c in _words_of(m, rank, rule).items():
            _acc(out, (p, w), v * c)
    return out


def _laurent_const(space: Space, c, order: int):
    """Laurent expansion of a scalar: ({param exponents: QI}, pole order)."""
    nparams = len(space.params)
    shift, _ = _split_den(c.den, nparams)
    field = space.field
    lift = c
    for k, e in enumerate(shift):
        if e:
            lift = lift * field.param(field.params[k]) ** e
    s = series_in_params(space.const(lift), order + sum(shift))
    out = {}
    for (p, _, _), v in s.terms.items():
        _acc(out, tuple(a - b for a, b in zip(p, shift)), v)
    return out, sum(shift)


def tensor_to_words(t, order: int, rank: dict, rule: str = "ascending") -> dict:
    """{(p, (word, ...)): QI} for a commutative tensor expression."""
    space = t.space
    one = space.field.one
    out: dict = {}
    leg_cache: dict = {}
    for legs, c in t.sorted_terms():
        coeff, pole = _laurent_const(space, c, order)
        work = order + pole
        partial = {(p, ()): v for p, v in coeff.items()}
        for leg in legs:
            key = (leg, work)
            if key not in leg_cache:
                leg_cache[key] = expr_to_words(Expr(space, {leg: one}), work, rank, rule)
            nxt: dict = {}
            for (pp, done), cc in partial.items():
                for (p2, w), c2 in leg_cache[key].items():
                    p = _padd(pp, p2)
                    if sum(p) > order + pole:
                        continue
                    _acc(nxt, (p, done + (w,)), cc * c2)
            partial = nxt
        for (p, words), v in partial.items():
            if sum(p) <= order:
                _acc(out, (p, words), v)
    if any(e < 0 for (p, _) in out for e in p):
        raise PoleAtOrigin("coproduct coefficient keeps a pole in the deformation parameters")
    return out


# -- presentation -----------------------------------------------------------------------------

@dataclass
class QuantumPresentation:
    space: Space
    order: int
    alphabet: tuple                    # letters in normal order
    relations: dict                    # (a, b), a before b -> NCSeries of [X_a, X_b]
    coproduct: dict                    # coordinate name -> NCTensor
    rule: str                          # "ordered" or "symmetrized"
    certificate: str                   # how ordering independence was established
    rewriter: Rewriter = dc_field(repr=False, default=None)

    @property
    def names(self):
        return self.space.coords

    def relation_lines(self) -> list[str]:
        names, params = self.names, self.space.params
        out = []
        for (a, b), s in sorted(self.relations.items(), key=lambda kv: (self.alphabet.index(kv[0][0]),
                                                                        self.alphabet.index(kv[0][1]))):
            if not s.is_zero():
                out.append(f"[{names[a]}, {names[b]}] = {s.format(names, params)}")
        return out

    def coproduct_lines(self) -> list[str]:
        names, params = self.names, self.space.params
        return [f"Delta({names[k]}) = {self.coproduct[names[k]].format(names, params)}"
                for k in self.alphabet]

    def relation(self, a: int, b: int) -> dict:
        """[X_a, X_b] in either argument order."""
        if (a, b) in self.relations:
            return self.relations[(a, b)].terms
        if (b, a) in self.relations:
            return {k: -v for k, v in self.relations[(b, a)].terms.items()}
        return {}


def _rank_of(space: Space, alphabet):
    alphabet = tuple(range(space.ncoords)) if alphabet is None else tuple(
        space.index[x] if isinstance(x, str) else x for x in alphabet)
    return alphabet, {k: i for i, k in enumerate(alphabet)}


def _relations_from(Q: BracketTable, order, alphabet, rank, rule, fuel):
    nparams = len(Q.space.params)
    raw = {}
    for i, a in enumerate(alphabet):
        for b in alphabet[i + 1:]:
            raw[(a, b)] = expr_to_words(Q.get(a, b), order, rank,
                                        "symmetrized" if rule == "symmetrized" else "ascending")
    if rule != "symmetrized":
        return raw, Rewriter(nparams, rank, raw, order, fuel)
    # symmetrized words need the relations themselves to be normal ordered; iterate to a fixed point
    current = {k: {kk: vv for kk, vv in v.items() if _is_sorted(kk[1], rank)} for k, v in raw.items()}
    for _ in range(order + 2):
        rw = Rewriter(nparams, rank, current, order, fuel)
        nxt = {k: rw.series(v) for k, v in raw.items()}
        if nxt == current:
            break
        current = nxt
    return current, Rewriter(nparams, rank, current, order, fuel)


def _is_sorted(w, rank):
    return all(rank[w[i]] <= rank[w[i + 1]] for i in range(len(w) - 1))


def ordering_defects(Q: BracketTable, delta: CoproductMap, rewriter: Rewriter, rank) -> list[str]:
    """Expressions whose quantization changes between ascending and descending letter order."""
    space = Q.space
    names = space.coords
    order = rewriter.order
    out = []
    for a, b in combinations(range(space.ncoords), 2):
        e = Q.get(a, b)
        if not e.terms:
            continue
        up = rewriter.series(expr_to_words(e, order, rank, "ascending"))
        down = rewriter.series(expr_to_words(e, order, rank, "descending"))
        if up != down:
            out.append(f"{{{names[a]}, {names[b]}}}")
    for c in space.coords:
        up = rewriter.tensor_normalize(tensor_to_words(delta[c], order, rank, "ascending"))
        down = rewriter.tensor_normalize(tensor_to_words(delta[c], order, rank, "descending"))
        if up != down:
            out.append(f"Delta({c})")
    return out


def quantize(Q: BracketTable, delta: CoproductMap, order: int, symmetrize: bool = False,
             alphabet=None, fuel: int = DEFAULT_FUEL) -> QuantumPresentation:
    """Replace brackets by commutators and coordinates by ordered words, to parameter order ``order``.

    Products of coordinates are quantized as ordered words.  This is only meaningful when the
    ordering does not matter: either no product mixes coordinates with a nonzero mutual bracket,
    or, failing that, ascending and descending orderings agree after normal ordering.
    """
    space = Q.space
    alphabet, rank = _rank_of(space, alphabet)
    if symmetrize:
        rule, certificate = "symmetrized", "symmetrized products"
    else:
        rule = "ordered"
        certificate = "no product mixes non-commuting coordinates"
    relations, rw = _relations_from(Q, order, alphabet, rank, rule, fuel)
    if not symmetrize and ambiguity_witnesses(Q, delta):
        bad = ordering_defects(Q, delta, rw, rank)
        if bad:
            raise AmbiguousOrdering(
                f"ordering ambiguity in {', '.join(bad[:4])}; use symmetrized products "
                "or other coordinates")
        certificate = "products of non-commuting coordinates are ordering independent"
    word_rule = "symmetrized" if symmetrize else "ascending"
    cop = {c: NCTensor(order, 2, rw.tensor_normalize(tensor_to_words(delta[c], order, rank, word_rule)))
           for c in space.coords}
    rels = {k: NCSeries(order, v) for k, v in relations.items()}
    P = QuantumPresentation(space, order, alphabet, rels, cop, rule, certificate, rw)
    _check_linear_limit(P, Q)
    return P


def _check_linear_limit(P: QuantumPresentation, Q: BracketTable):
    """At parameter order zero the relations must be the Lie bracket of the coordinates."""
    zero = (0,) * len(P.space.params)
    for (a, b), s in P.relations.items():
        lin = Q.get(a, b).linear_part()
        target = {}
        for k, v in lin.gradient_at_zero().items():
            target[(zero, (k,))] = QI(*v.as_fraction_pair())
        got = {k: v for k, v in s.part(0).terms.items()}
        if got != target:
            raise AmbiguousOrdering(f"order-zero relation for ({P.names[a]}, {P.names[b]}) "
                                    "is not the Lie bracket")


# -- checks ------------------------------------------------------------------------------------

@dataclass
class PairCheck:
    label: str
    verified_order: int
    first_failure: int | None
    residual: dict = dc_field(repr=False, default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.first_failure is None


@dataclass
class CheckReport:
    name: str
    order: int
    rows: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def first_failure(self) -> int | None:
        fails = [r.first_failure for r in self.rows if r.first_failure is not None]
        return min(fails) if fails else None

    def lines(self) -> list[str]:
        out = []
        for r in self.rows:
            tail = "pass" if r.ok else f"FAIL at order {r.first_failure}"
            out.append(f"{r.label}: verified to order {r.verified_order}, {tail}")
        return out


def _pair_row(label, residual: dict, order) -> PairCheck:
    low = min((sum(p) for p, _ in residual), default=None)
    if low is None:
        return PairCheck(label, order, None)
    return PairCheck(label, low - 1, low, residual)


def coproduct_of_word(P: QuantumPresentation, w: Word) -> dict:
    rw = P.rewriter
    zero = (0,) * len(P.space.params)
    out = {(zero, ((), ())): QI(1)}
    for letter in w:
        out = rw.tensor_mul(out, P.coproduct[P.names[letter]].terms)
    return out


def coproduct_of_series(P: QuantumPresentation, terms: dict) -> dict:
    out: dict = {}
    for (p, w), c in terms.items():
        if sum(p) > P.order:
            continue
        for (p2, legs), c2 in coproduct_of_word(P, w).items():
            q = _padd(p, p2)
            if sum(q) <= P.order:
                _acc(out, (q, legs), c * c2)
    return out


def check_quantum_hom(P: QuantumPresentation) -> CheckReport:
    """[Delta X_a, Delta X_b] = Delta([X_a, X_b]) for every pair, to the presentation order."""
    rw = P.rewriter
    names = P.names
    rows = []
    for i, a in enumerate(P.alphabet):
        for b in P.alphabet[i + 1:]:
            A, B = P.coproduct[names[a]].terms, P.coproduct[names[b]].terms
            lhs = dict(rw.tensor_mul(A, B))
            for k, v in rw.tensor_mul(B, A).items():
                _acc(lhs, k, -v)
            rhs = coproduct_of_series(P, P.relation(a, b))
            for k, v in rhs.items():
                _acc(lhs, k, -v)
            rows.append(_pair_row(f"({names[a]}, {names[b]})", lhs, P.order))
    return CheckReport("homomorphism", P.order, rows)


def _apply_on_leg(P: QuantumPresentation, terms: dict, leg: int) -> dict:
    out: dict = {}
    for (p, (w1, w2)), c in terms.items():
        w = w1 if leg == 0 else w2
        for (p2, (u1, u2)), c2 in coproduct_of_word(P, w).items():
            q = _padd(p, p2)
            if sum(q) > P.order:
                continue
            legs = (u1, u2, w2) if leg == 0 else (w1, u1, u2)
            _acc(out, (q, legs), c * c2)
    return P.rewriter.tensor_normalize(out)


def check_quantum_coassoc(P: QuantumPresentation) -> CheckReport:
    rows = []
    for k in P.alphabet:
        name = P.names[k]
        t = P.coproduct[name].terms
        diff = dict(_apply_on_leg(P, t, 0))
        for key, v in _apply_on_leg(P, t, 1).items():
            _acc(diff, key, -v)
        rows.append(_pair_row(name, diff, P.order))
    return CheckReport("coassociativity", P.order, rows)


# -- mutation and power tests --------------------------------------------------------------------

def drop_coproduct_term(P: QuantumPresentation, name: str, index: int = 0) -> QuantumPresentation:
    """Copy of ``P`` with one order-zero term removed from Delta(name)."""
    t = P.coproduct[name]
    keys = sorted(k for k in t.terms if not sum(k[0]))
    victim = keys[index % len(keys)]
    cop = dict(P.coproduct)
    cop[name] = NCTensor(t.order, t.rank, {k: v for k, v in t.terms.items() if k != victim})
    return QuantumPresentation(P.space, P.order, P.alphabet, P.relations, cop, P.rule,
                               P.certificate, P.rewriter)


def perturb_relation(P: QuantumPresentation, a: int, b: int, word: Word,
                     degree: int | None = None) -> QuantumPresentation:
    """Copy of ``P`` with params^degree * word added to [X_a, X_b] (degree defaults to the order)."""
    degree = P.order if degree is None else degree
    p = (degree,) + (0,) * (len(P.space.params) - 1)
    key = (a, b) if (a, b) in P.relations else (b, a)
    sign = QI(1) if key == (a, b) else QI(-1)
    rels = dict(P.relations)
    rels[key] = rels[key] + NCSeries(P.order, {(p, tuple(word)): sign})
    rw = Rewriter(len(P.space.params), P.rewriter.rank, {k: v.terms for k, v in rels.items()},
                  P.order, P.rewriter.fuel)
    return QuantumPresentation(P.space, P.order, P.alphabet, rels, P.coproduct, P.rule,
                               P.certificate, rw)


def normal_order(terms: dict, P: QuantumPresentation, rng: random.Random | None = None) -> NCSeries:
    """Normal form of a raw {(p, word): QI} series; a seeded ``rng`` picks rewrite sites at random."""
    rw = P.rewriter
    if rng is not None:
        rw = Rewriter(rw.nparams, rw.rank, rw.relations, rw.order, rw.fuel, rng)
    return NCSeries(P.order, rw.series(terms))


def word_series(P: QuantumPresentation, *names) -> dict:
    zero = (0,) * len(P.space.params)
    return {(zero, tuple(P.space.index[n] for n in names)): QI(1)}


# -- report ---------------------------------------------------------------------------------------

@dataclass
class QuantizationReport:
    presentation: QuantumPresentation
    hom: CheckReport
    coassoc: CheckReport

    @property
    def ok(self) -> bool:
        return self.hom.ok and self.coassoc.ok

    def lines(self) -> list[str]:
        P = self.presentation
        out = [f"order: {P.order}", f"products: {P.rule}", f"ordering: {P.certificate}",
               "relations:"]
        out += ["  " + x for x in P.relation_lines()]
        out.append("homomorphism check:")
        out += ["  " + x for x in self.hom.lines()]
        out.append("coassociativity check:")
        out += ["  " + x for x in self.coassoc.lines()]
        return out


def quantization_report(Q: BracketTable, delta: CoproductMap, order: int,
                        symmetrize: bool = False) -> QuantizationReport:
    P = quantize(Q, delta, order, symmetrize)
    return QuantizationReport(P, check_quantum_hom(P), check_quantum_coassoc(P))


def exp_word_series(P: QuantumPresentation, name: str, coeff: Fraction, param: int = 0) -> dict:
    """Truncated exp(coeff * param * X) as words; used by the examples and tests."""
    k = P.space.index[name]
    nparams = len(P.space.params)
    out = {}
    for n in range(P.order + 1):
        p = tuple(n if j == param else 0 for j in range(nparams))
        out[(p, (k,) * n)] = QI(Fraction(coeff) ** n / factorial(n))
    return out


__all__ = ["NCSeries", "NCTensor", "QuantumPresentation", "Rewriter", "quantize", "normal_order",
           "check_quantum_hom", "check_quantum_coassoc", "drop_coproduct_term", "perturb_relation",
           "quantization_report", "QuantizationReport", "CheckReport", "expr_to_words",
           "tensor_to_words", "ordering_defects", "word_series", "exp_word_series"]
