"""Canonical text and JSON reports for the pipeline stages.

A report is a list of sections, each a title and a list of lines.  Nothing
time- or machine-dependent enters a section unless timings are requested, so
two runs on the same deck give identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .bialgebra import _wedge_text, format_table
from .coproduct import antipode_defects, counit_values
from .linsolve import CONST
from .plsolver import (check_classical_limit, check_jacobi, check_linearization, family_table,
                       homomorphism_defects, jacobi_defects)
from .transform import ambiguity_witnesses


@dataclass
class Report:
    title: str
    sections: list = dc_field(default_factory=list)   # (heading, [lines])
    data: dict = dc_field(default_factory=dict)

    def add(self, heading: str, lines, key: str | None = None, value=None):
        lines = list(lines)
        self.sections.append((heading, lines))
        self.data[key or heading] = value if value is not None else lines

    def text(self) -> str:
        out = [f"# {self.title}"]
        for heading, lines in self.sections:
            out.append("")
            out.append(f"== {heading} ==")
            out.extend(lines)
        return "\n".join(out) + "\n"

    def json(self) -> str:
        return json.dumps({"title": self.title, **self.data}, indent=2, sort_keys=False) + "\n"


def _flag(ok: bool) -> str:
    return "pass" if ok else "FAIL"


def _r_lines(r, names) -> list[str]:
    terms = r.wedge_terms()
    return ["r = " + (_wedge_text(terms, names) if terms else "0")]


# -- sections ---------------------------------------------------------------------------------

def deck_section(rep: Report, p):
    d = p.deck
    lines = [f"name: {d.name}", f"parameters: {', '.join(d.params) or '-'}",
             f"generators: {', '.join(d.generators)}",
             f"coordinates: {', '.join(d.coord_names)}",
             f"method: {d.method}"]
    if d.coordinate_change is not None:
        lines.append(f"primed coordinates: {', '.join(d.coordinate_change.primed_coords)}")
    rep.add("deck", lines, "deck")


def validate_section(rep: Report, p):
    b = p.bialgebra
    v = p.validation
    lines = format_table(b) + [f"validation: {_flag(v.ok)}"]
    rep.add("Lie bialgebra", lines, "bialgebra")


def dual_section(rep: Report, p):
    rep.add("dual Lie bialgebra", format_table(p.dual), "dual")


def coboundary_section(rep: Report, p):
    lines = []
    pc = p.primal_coboundary
    if pc.is_coboundary:
        lines.append("primal: coboundary, " + _r_lines(pc.r, p.bialgebra.names)[0])
        lines.append(f"primal: r-matrix solution space dimension {pc.solution_dim}")
    else:
        lines.append("primal: not a coboundary")
    dc = p.dual_coboundary
    if dc.is_coboundary:
        lines.append("dual: coboundary, " + _r_lines(dc.r, p.dual.names)[0])
    else:
        lines.append("dual: not a coboundary")
    rep.add("coboundary", lines, "coboundary")


def group_section(rep: Report, p, fold):
    R = p.representation
    mats = p.deck.representation_matrices()
    source = "deck" if mats is not None else "adjoint of the dual algebra"
    lines = [f"representation: {source}, dimension {R.dim}, faithful: {R.faithful}",
             "exponential order: " + " ".join(p.deck.order_names)]
    lines += p.group_element.format_rows(fold)
    lines.append("recipes:")
    lines += [f"  {r.target} = {r.body}" for r in p.recipes]
    rep.add("group element", lines, "group")


def coproduct_section(rep: Report, p, fold):
    delta = p.coproduct_or_none
    if delta is None:
        rep.add("coproduct", ["not available in closed form: " + p.coproduct_obstruction], "coproduct")
        return
    lines = delta.lines(fold)
    counit = delta.check_counit()
    coassoc = delta.check_coassociativity()
    lines.append(f"counit: {_flag(all(counit.values()))}")
    lines.append(f"coassociativity: {_flag(all(coassoc.values()))}")
    eps = counit_values(delta.space)
    lines.append("epsilon: " + ", ".join(f"{c} -> {e}" for c, e in eps.items()))
    S = p.antipode
    lines += [f"S({c}) = {S[c].format(fold)}" for c in delta.space.coords]
    ok = all(e.is_zero() for e in antipode_defects(delta, S).values())
    lines.append(f"antipode: {_flag(ok)}")
    prim = [c for c, f in delta.primitive_flags().items() if f]
    lines.append("primitive: " + (", ".join(prim) if prim else "-"))
    rep.add("coproduct", lines, "coproduct")


def bracket_section(rep: Report, p, fold, timings=False):
    lines = []
    sol = p.solution
    if sol is None:
        lines.append("method: Sklyanin bracket of the dual r-matrix")
    else:
        lines.append("method: quadratic Ansatz")
        lines += ansatz_lines(sol, fold, timings)
    lines.append("bracket:")
    lines += ["  " + x for x in p.table.lines(fold)]
    rep.add("Poisson-Lie bracket", lines, "bracket")


def family_lines(system, family, fold) -> list[str]:
    """Q_ij of the family before linearization, one line per nonzero pair."""
    tabs = family_table(system, family)
    names = system.space.coords
    out = []
    keys = sorted(w for w in tabs if w != CONST)
    const = [w for w in tabs if w == CONST]
    for i, j in system.pairs:
        parts = []
        for w in const:
            e = tabs[w].get(i, j)
            if e.terms:
                parts.append(e.format(fold))
        for w in keys:
            e = tabs[w].get(i, j)
            if e.terms:
                parts.append(f"{system.label(w)}*({e.format(fold)})")
        if parts:
            out.append(f"{{{names[i]}, {names[j]}}} = " + " + ".join(parts))
    return out


def checks_section(rep: Report, p):
    Q = p.table
    c = p.bialgebra.algebra.c
    gen_of = p.deck.gen_of
    jac = jacobi_defects(Q)
    lines = [f"jacobi: {_flag(not jac)}",
             f"classical limit: {_flag(check_classical_limit(Q, c, gen_of))}",
             f"linearization: {_flag(check_linearization(Q, c, gen_of))}",
             _multiplicativity_line(p, Q)]
    rep.add("bracket checks", lines, "checks")


def _multiplicativity_line(p, Q) -> str:
    delta = p.coproduct_or_none
    if delta is None:
        return f"multiplicativity (invariant fields): {_flag(not p.multiplicativity_defects(Q))}"
    return f"homomorphism: {_flag(not homomorphism_defects(Q, delta))}"


def ansatz_lines(sol, fold, timings=False) -> list[str]:
    system = sol.system
    st = sol.stats
    lines = [f"function set source: {st.get('function_set_source', '-')}"]
    lines += system.fset.lines()
    lines.append(f"unknowns: {system.n_unknowns}")
    lines.append(f"equations: {len(system.rows)}")
    for k in sorted(st):
        if (k.endswith("_seconds") and not timings) or k in ("function_set_source", "unknowns", "equations"):
            continue
        lines.append(f"stat {k}: {st[k]}")
    lines.append(f"family parameters: {len(sol.family.free)}")
    if len(sol.family.free) <= 12:
        lines.append("family:")
        lines += ["  " + x for x in family_lines(system, sol.family, fold)]
    nz = {system.label(v): x for v, x in sol.beta.items() if not x.is_zero()}
    if len(nz) <= 40:
        lines.append("solution:")
        lines += [f"  {k} = {v}" for k, v in sorted(nz.items())]
    lines.append(f"free directions left by linearization: {sol.effective_free}")
    return lines


def cross_method_section(rep: Report, p, fold, timings=False):
    if not p.has_cross_method():
        rep.add("cross-method", ["skipped: the dual bialgebra is not a coboundary"], "cross_method")
        return
    skl, sol, condition = p.cross_method()
    lines = ["Sklyanin bracket:"] + ["  " + x for x in skl.lines(fold)]
    lines.append(f"quadratic Ansatz, {condition}:")
    if p.deck.method == "sklyanin":
        lines += ["  " + x for x in ansatz_lines(sol, fold, timings)]
    else:
        lines.append("  as in the Poisson-Lie bracket section")
    lines.append("Ansatz bracket:")
    lines += ["  " + x for x in sol.table.lines(fold)]
    lines.append(f"Sklyanin equals Ansatz: {_flag(skl == sol.table)}")
    rep.add("cross-method", lines, "cross_method")


def transform_section(rep: Report, p, fold):
    if p.deck.coordinate_change is None:
        rep.add("coordinate change", ["none"], "transform")
        return
    cc = p.deck.coordinate_change
    lines = ["forward:"] + [f"  {k} = {v}" for k, v in cc.forward.items()]
    lines += ["inverse:"] + [f"  {k} = {v}" for k, v in cc.inverse.items()]
    lines.append(f"round trip: {_flag(not p.change.round_trip_defects())}")
    Q, delta = p.primed
    lines.append("bracket:")
    lines += ["  " + x for x in Q.lines(fold)]
    lines.append("coproduct:")
    lines += ["  " + x for x in delta.lines(fold)]
    lines.append(f"jacobi: {_flag(check_jacobi(Q))}")
    lines.append(f"coassociativity: {_flag(all(delta.check_coassociativity().values()))}")
    lines.append(f"homomorphism: {_flag(not homomorphism_defects(Q, delta))}")
    rep.add("coordinate change", lines, "transform")


def symmetry_section(rep: Report, p, negate=None, specialize=None):
    names = negate if negate is not None else (p.deck.symmetry_negate or p.deck.params)
    lines = [f"negated parameters: {', '.join(names)}"]
    if p.coproduct_or_none is None:
        rep.add("quantum symmetry", lines + ["skipped: no closed-form coproduct"], "symmetry")
        return
    if specialize:
        lines.append("specialized: " + ", ".join(f"{k} = {v}" for k, v in specialize.items()))
    for label, flags in (("original", p.unprimed_symmetry(names, specialize)),
                         ("primed", p.symmetry(names, specialize))):
        if label == "primed" and p.deck.coordinate_change is None:
            continue
        lines.append(f"{label}: " + ", ".join(f"{c} {'yes' if ok else 'no'}" for c, ok in flags.items()))
    extra = p.deck.symmetry_specialize
    if specialize is None and extra:
        fixed = ", ".join(f"{k} = {v}" for k, v in extra.items())
        for label, flags in (("original", p.unprimed_symmetry(names, extra)),
                             ("primed", p.symmetry(names, extra))):
            if label == "primed" and p.deck.coordinate_change is None:
                continue
            lines.append(f"{label} at {fixed}: "
                         + ", ".join(f"{c} {'yes' if ok else 'no'}" for c, ok in flags.items()))
    Q, delta = p.primed
    wit = ambiguity_witnesses(Q, delta)
    lines.append("products of non-commuting coordinates: " + ("none" if not wit else str(len(wit))))
    lines += ["  " + w for w in wit]
    rep.add("quantum symmetry", lines, "symmetry")


def quantize_section(rep: Report, p, order=None):
    which, qr = p.quantize_check(order)
    lines = [f"coordinates: {which}"] + qr.lines()
    lines.append(f"result: {_flag(qr.ok)}")
    rep.add("quantization", lines, "quantization")
    return qr


def timings_section(rep: Report, p):
    rep.add("timings", [f"{k}: {v}" for k, v in sorted(p.timings.items())], "timings")
