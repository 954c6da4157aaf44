"""Acceptance suite: one verdict line per criterion, exact equality throughout.

Each test records ``criterion N: pass|FAIL; detail`` and then asserts the
verdict, so a failing criterion fails its test.
"""

import time
from pathlib import Path

from acceptance_log import record
from conftest import fresh_pipeline, get_pipeline

import reference as R
from plquant.bialgebra import coboundary_solve, format_table, r_in_solution_set
from plquant.cli import diff_golden, run_report
from plquant.deck import default_deck_dir
from plquant.linsolve import CONST
from plquant.ncquant import (check_quantum_coassoc, check_quantum_hom, drop_coproduct_term,
                             quantize)
from plquant.plsolver import check_classical_limit, check_jacobi, family_table, homomorphism_defects

GOLDENS = Path(__file__).resolve().parents[1] / "goldens"
DECKS = sorted(p.stem for p in default_deck_dir().glob("*.json"))


def _co_bad(delta, table, space):
    return sorted(k for k, v in table.items() if delta[k] != R.tensor_sum(space, v))


def _timed(name, force):
    t0 = time.perf_counter()
    p = fresh_pipeline(name)
    force(p)
    return p, time.perf_counter() - t0


def _verdict(n, problems, extra=""):
    ok = not problems
    detail = "; ".join(problems) if problems else "all items match"
    record(n, ok, f"{detail}{'; ' + extra if extra else ''}")
    assert ok, detail


# -- 1 ----------------------------------------------------------------------------------

def test_criterion_1_sl2():
    p, secs = _timed("sl2_standard", lambda p: p.table)
    S = p.deck.space
    bad = []
    if format_table(p.dual) != R.SL2_DUAL_LINES:
        bad.append("dual algebra differs")
    if p.group_element.matrix != [[R.expr(S, x) for x in row] for row in R.SL2_GROUP]:
        bad.append("group element differs")
    bad += [f"coproduct of {k} differs" for k in _co_bad(p.coproduct, R.SL2_COPRODUCT, S)]
    sol = p.solution
    tabs = family_table(sol.system, sol.family)
    fam = {sol.system.label(w): t for w, t in tabs.items() if w != CONST}
    if set(fam) != set(R.SL2_FAMILY) or any(
            R.table_mismatches(t, R.table(S, R.SL2_FAMILY[k])) for k, t in fam.items()):
        bad.append("beta family differs")
    for lab, value in R.SL2_BETA.items():
        i, j, k, l = map(int, lab.split("_")[1].split(","))
        if sol.beta[sol.system.var_of_label(i, j, k, l)] != R.expr(S, value).as_scalar():
            bad.append(f"{lab} differs")
    bad += R.table_mismatches(p.table, R.table(S, R.SL2_BRACKET))
    if secs >= 5:
        bad.append(f"runtime {secs:.2f} s")
    _verdict(1, bad, f"{len(fam)} family parameters, runtime {secs:.2f} s")


# -- 2 ----------------------------------------------------------------------------------

def test_criterion_2_unknown_counts():
    expected = {"sl2_standard": 45, "so22_drinfeld_jimbo": 2040, "kappa_poincare": 11385}
    got = {k: get_pipeline(k).solution.system.n_unknowns for k in expected}
    bad = [f"{k}: {got[k]} unknowns, expected {v}" for k, v in expected.items() if got[k] != v]
    _verdict(2, bad, ", ".join(f"{k} {v}" for k, v in got.items()))


# -- 3 ----------------------------------------------------------------------------------

def test_criterion_3_so22():
    p, secs = _timed("so22_drinfeld_jimbo", lambda p: p.primed)
    S = p.deck.space
    Q, delta = p.primed
    P = Q.space
    bad = []
    rows = R.table_mismatches(p.table, R.table(S, R.SO22_BRACKET))
    prow = R.table_mismatches(Q, R.table(P, R.SO22_PRIMED_BRACKET))
    bad += [f"bracket row {r.split(':')[0]} differs" for r in rows]
    bad += [f"primed row {r.split(':')[0]} differs" for r in prow]
    bad += [f"primed coproduct of {k} differs"
            for k in _co_bad(delta, R.SO22_PRIMED_COPRODUCT, P)]
    if secs >= 120:
        bad.append(f"runtime {secs:.1f} s")
    # context for a failure: do the reference rows define a Poisson-Lie bracket at all?
    notes = [f"runtime {secs:.1f} s"]
    if rows:
        broken = bool(homomorphism_defects(R.table(S, R.SO22_BRACKET), p.coproduct))
        fixed = not R.table_mismatches(p.table, R.table(S, R.SO22_BRACKET_CORRECTED))
        notes.append(f"reference table is a Poisson map: {not broken}; "
                     f"solved table equals the corrected row: {fixed}")
    if prow:
        broken = bool(homomorphism_defects(R.table(P, R.SO22_PRIMED_BRACKET), delta))
        fixed = not R.table_mismatches(Q, R.table(P, R.SO22_PRIMED_BRACKET_CORRECTED))
        notes.append(f"reference primed table is a Poisson map: {not broken}; "
                     f"solved primed table equals the sign-corrected row: {fixed}")
    _verdict(3, bad, "; ".join(notes))


# -- 4 ----------------------------------------------------------------------------------

def test_criterion_4_kappa():
    p, secs = _timed("kappa_poincare", lambda p: p.primed)
    S = p.deck.space
    Q, delta = p.primed
    P = Q.space
    bad = []
    bad += R.table_mismatches(p.table, R.table(S, R.kappa_bracket()))
    bad += [f"coproduct of {k} differs" for k in _co_bad(p.coproduct, R.kappa_coproduct(), S)]
    bad += R.table_mismatches(Q, R.table(P, R.kappa_primed_bracket()))
    bad += [f"primed coproduct of {k} differs"
            for k in _co_bad(delta, R.kappa_primed_coproduct(), P)]
    if secs >= 900:
        bad.append(f"runtime {secs:.1f} s")
    st = p.solution.stats
    stats = (f"runtime {secs:.1f} s; solver: {st['unknowns']} unknowns, {st['equations']} equations, "
             f"{st['function_set_size']} functions, {st['family_parameters']} family parameters, "
             f"{st['elim_pivots']} pivots, elimination {st['elimination_seconds']} s, "
             f"{st['effective_free']} free directions after linearization")
    _verdict(4, bad, stats)


# -- 5 ----------------------------------------------------------------------------------

def test_criterion_5_twisted():
    p = get_pipeline("kappa_poincare_twisted")
    S = p.deck.space
    bad = [f"twisted coproduct of {k} differs"
           for k in _co_bad(p.coproduct, R.twisted_coproduct(), S)]
    kappa = get_pipeline("kappa_poincare")
    if [x for x in p.table.lines()] != kappa.table.lines():
        bad.append("twisted bracket differs from the untwisted one")
    bad += R.table_mismatches(p.table, R.table(S, R.kappa_bracket()))
    flat = p.coproduct.substitute_params({"eta": p.deck.field(0)})
    bad += [f"eta = 0 coproduct of {k} differs" for k in _co_bad(flat, R.kappa_coproduct(), S)]
    src = p.solution.stats.get("function_set_source")
    _verdict(5, bad, f"function set from {src}")


# -- 6 ----------------------------------------------------------------------------------

def test_criterion_6_coboundary_verdicts():
    bad = []
    for name in ("sl2_standard", "so22_drinfeld_jimbo", "kappa_poincare"):
        if get_pipeline(name).dual_coboundary.is_coboundary:
            bad.append(f"dual of {name} reported as a coboundary")
    primal = get_pipeline("sl2_standard").bialgebra
    res = coboundary_solve(primal)
    if not res.is_coboundary or not r_in_solution_set(primal, res.r):
        bad.append("no valid r for the sl(2) primal bialgebra")
    _verdict(6, bad, "three duals not coboundary, sl(2) primal r found")


# -- 7 ----------------------------------------------------------------------------------

def _limit_primitive(delta, params, field):
    flat = delta.substitute_params({x: field(0) for x in params})
    return all(flat.primitive_flags().values())


def test_criterion_7_properties():
    bad, notes = [], []
    for name in DECKS:
        p = get_pipeline(name)
        d = p.deck
        Q = p.table
        if not check_jacobi(Q):
            bad.append(f"{name}: Jacobi")
        if not check_classical_limit(Q, p.bialgebra.algebra.c, d.gen_of):
            bad.append(f"{name}: parameter limit of the bracket")
        delta = p.coproduct_or_none
        if delta is None:
            mult_ok = not p.multiplicativity_defects(Q)
            notes.append(f"{name}: no closed-form coordinate coproduct, so its coproduct axioms "
                         f"are not evaluated; bracket multiplicativity {'ok' if mult_ok else 'FAIL'}")
            if not mult_ok:
                bad.append(f"{name}: multiplicativity")
            continue
        if not all(delta.check_coassociativity().values()):
            bad.append(f"{name}: coassociativity")
        if not all(delta.check_counit().values()):
            bad.append(f"{name}: counit")
        cob_params = any(not x.is_constant() for a in p.bialgebra.cocommutator.f
                         for b in a for x in b)
        if cob_params or not d.params:
            if not _limit_primitive(delta, d.params, d.field):
                bad.append(f"{name}: coproduct limit is not primitive")
        else:
            notes.append(f"{name}: parameters enter only the Lie bracket, no coproduct limit")
        if d.coordinate_change is not None:
            spec = d.symmetry_specialize
            flags = p.symmetry(specialize=spec)
            if not all(flags.values()):
                bad.append(f"{name}: primed flip symmetry")
            if spec:
                literal = p.symmetry()
                off = [k for k, v in literal.items() if not v]
                notes.append(f"{name}: symmetry checked at {spec}; without it {', '.join(off)} "
                             "fail through the twist terms")
    unprimed = get_pipeline("sl2_standard").unprimed_symmetry()
    if all(unprimed.values()):
        bad.append("every unprimed sl(2) coproduct is flip symmetric")
    else:
        notes.append("unprimed sl(2) asymmetric at " +
                     ", ".join(k for k, v in unprimed.items() if not v))
    _verdict(7, bad, "; ".join(notes))


# -- 8 ----------------------------------------------------------------------------------

def test_criterion_8_cross_method():
    p = get_pipeline("book_via_sklyanin")
    skl, sol, condition = p.cross_method()
    bad = [] if skl == sol.table else ["Sklyanin and Ansatz brackets differ"]
    bad += R.table_mismatches(skl, sol.table)
    _verdict(8, bad, f"Ansatz under {condition}, {sol.system.n_unknowns} unknowns, "
                     f"{sol.effective_free} free directions; "
                     f"coordinate coproduct: {p.coproduct_obstruction or 'available'}")


# -- 9 ----------------------------------------------------------------------------------

def test_criterion_9_quantization():
    plan = [("sl2_standard", 4), ("so22_drinfeld_jimbo", 4), ("kappa_poincare", 3),
            ("kappa_poincare_twisted", 3)]
    bad, notes = [], []
    for name, N in plan:
        Q, delta = get_pipeline(name).primed
        P = quantize(Q, delta, N)
        hom, co = check_quantum_hom(P), check_quantum_coassoc(P)
        if not hom.ok:
            bad.append(f"{name}: homomorphism fails at order {hom.first_failure}")
        if not co.ok:
            bad.append(f"{name}: coassociativity fails at order {co.first_failure}")
        notes.append(f"{name} N={N}")
        if name in ("sl2_standard", "so22_drinfeld_jimbo"):
            victim = next(c for c in Q.space.coords if not delta.is_primitive(c))
            first = check_quantum_hom(drop_coproduct_term(P, victim)).first_failure
            if first is None or first > 1:
                bad.append(f"{name}: mutation of {victim} not detected by order 1")
            notes.append(f"mutation of {victim} fails at order {first}")
    _verdict(9, bad, ", ".join(notes))


# -- 10 ---------------------------------------------------------------------------------

def test_criterion_10_determinism():
    bad = []
    for name in DECKS:
        first, second = run_report(name), run_report(name)
        if first != second:
            bad.append(f"{name}: two runs differ")
        ok, msg = diff_golden(first, (GOLDENS / f"{name}.txt").read_text())
        if not ok:
            bad.append(f"{name}: golden {msg.splitlines()[0]}")
    _verdict(10, bad, f"{len(DECKS)} decks, two runs each, goldens compared")
