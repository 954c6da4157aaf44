"""Exact sparse Gaussian elimination over the scalar field.

Rows are dicts ``var -> Scalar``; the key :data:`CONST` holds the constant
term so that a row reads ``sum a_v x_v + a_CONST = 0``.  The solution is a
parametric family ``x = x0 + N t`` over the free variables.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .errors import NoSolution

CONST = -1


@dataclass
class EliminationStats:
    equations_in: int = 0
    equations_unique: int = 0
    unknowns: int = 0
    singletons: int = 0
    pivots: int = 0
    free: int = 0
    max_row_length: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class ParametricSolution:
    """Each variable is an affine combination of the free variables (and CONST)."""

    unknowns: list
    free: list
    values: dict = field(default_factory=dict)
    stats: EliminationStats = field(default_factory=EliminationStats)

    def value(self, var) -> dict:
        return self.values[var]

    def is_zero(self, var) -> bool:
        return not self.values[var]

    def substitute(self, assignment: dict, field) -> dict:
        """Plug scalars in for the free variables (missing ones are 0)."""
        out = {}
        for var in self.unknowns:
            acc = field.zero
            for v, c in self.values[var].items():
                if v == CONST:
                    acc = acc + c
                elif v in assignment:
                    acc = acc + c * assignment[v]
            out[var] = acc
        return out


def _normalized_key(row: dict):
    try:
        lead = min(row)
    except TypeError:
        lead = min(row, key=repr)
    inv = row[lead].inverse()
    return frozenset((v, c * inv) for v, c in row.items())


def _cost(c) -> tuple:
    return (c.degree(), c.nterms())


def solve_sparse(rows, unknowns, field, prefer_free=None) -> ParametricSolution:
    """Solve the linear system.

    ``prefer_free`` is an optional ordering hint: variables listed early are kept
    free when there is a choice (they are chosen as pivots last).
    """
    stats = EliminationStats(equations_in=len(rows), unknowns=len(unknowns))
    rank_hint = {}
    if prefer_free:
        for k, v in enumerate(prefer_free):
            rank_hint[v] = len(prefer_free) - k
    store: dict[int, dict] = {}
    seen = set()
    for row in rows:
        row = {v: c for v, c in row.items() if not c.is_zero()}
        if not row:
            continue
        key = _normalized_key(row)
        if key in seen:
            continue
        seen.add(key)
        store[len(store)] = row
    stats.equations_unique = len(store)
    cols: dict = {}
    for rid, row in store.items():
        for v in row:
            if v != CONST:
                cols.setdefault(v, set()).add(rid)
    heap = [(len(row), rid) for rid, row in store.items()]
    heapq.heapify(heap)
    pivot_rows: list[tuple] = []

    while heap:
        length, rid = heapq.heappop(heap)
        row = store.get(rid)
        if row is None or len(row) != length:
            continue
        variables = [v for v in row if v != CONST]
        if not variables:
            raise NoSolution("inconsistent linear system (nonzero constant row)")
        pv = min(variables, key=lambda v: (rank_hint.get(v, 0), len(cols.get(v, ())),
                                           _cost(row[v]), v))
        del store[rid]
        for v in variables:
            cols[v].discard(rid)
        if len(row) == 1:
            stats.singletons += 1
        stats.pivots += 1
        stats.max_row_length = max(stats.max_row_length, len(row))
        pivot_rows.append((pv, row))
        inv = row[pv].inverse()
        for other_id in list(cols.get(pv, ())):
            other = store[other_id]
            factor = other[pv] * inv
            for v, c in row.items():
                nc = other.get(v)
                delta = factor * c
                if nc is None:
                    other[v] = -delta
                    if v != CONST:
                        cols.setdefault(v, set()).add(other_id)
                else:
                    s = nc - delta
                    if s.is_zero():
                        del other[v]
                        if v != CONST:
                            cols[v].discard(other_id)
                    else:
                        other[v] = s
            if not other:
                del store[other_id]
            else:
                heapq.heappush(heap, (len(other), other_id))
        cols.pop(pv, None)

    pivots = {pv for pv, _ in pivot_rows}
    free = [v for v in unknowns if v not in pivots]
    stats.free = len(free)
    values: dict = {v: {v: field.one} for v in free}
    for pv, row in reversed(pivot_rows):
        inv = -row[pv].inverse()
        acc: dict = {}
        for v, c in row.items():
            if v == pv:
                continue
            coeff = c * inv
            if v == CONST:
                contrib = {CONST: coeff}
            else:
                contrib = {w: coeff * d for w, d in values[v].items()}
            for w, d in contrib.items():
                s = acc.get(w)
                s = d if s is None else s + d
                if s.is_zero():
                    acc.pop(w, None)
                else:
                    acc[w] = s
        values[pv] = acc
    return ParametricSolution(list(unknowns), free, values, stats)


def reparametrize(sol: ParametricSolution, new_free: list, field) -> ParametricSolution:
    """Re-express a family in terms of a different set of free variables.

    The new free variables must be a parameterization of the same family (their
    value maps onto the old free variables must be invertible).
    """
    rows = []
    aux = [("__old__", v) for v in sol.free]
    for var in new_free:
        expr = sol.values[var]
        row = {("__new__", var): field.one}
        for w, c in expr.items():
            row[("__old__", w) if w != CONST else CONST] = -c
        rows.append(row)
    if len(new_free) != len(sol.free):
        raise ValueError("reparametrization needs as many new free variables as old ones")
    inner = solve_sparse(rows, aux + [("__new__", v) for v in new_free], field,
                         prefer_free=[("__new__", v) for v in new_free])
    if any(f[0] != "__new__" for f in inner.free):
        raise ValueError("requested free variables do not parameterize the family")
    values = {}
    for var in sol.unknowns:
        acc: dict = {}
        for w, c in sol.values[var].items():
            if w == CONST:
                contrib = {CONST: c}
            else:
                contrib = {}
                for u, d in inner.values[("__old__", w)].items():
                    contrib[u[1] if u != CONST else CONST] = c * d
            for u, d in contrib.items():
                s = acc.get(u)
                s = d if s is None else s + d
                if s.is_zero():
                    acc.pop(u, None)
                else:
                    acc[u] = s
        values[var] = acc
    return ParametricSolution(list(sol.unknowns), list(new_free), values, sol.stats)
