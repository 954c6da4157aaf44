"""Stage-by-stage pipeline over a deck, with lazily cached intermediate objects.

Every stage re-checks the invariants of its output before later stages use
it; a failed check raises with the stage tag so the CLI can map it to an
exit code.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .bialgebra import coboundary_solve, dualize, format_table, validate
from .coproduct import antipode_defects, derive_antipode, derive_coproduct
from .deck import Deck, resolve_deck
from .errors import InvalidInput, NoSolution, NonGroupLikeLog, PLQuantError
from .grouprep import adjoint_rep, build_group_element, make_representation
from .plsolver import (BracketTable, build_function_set, check_classical_limit, check_jacobi,
                       check_linearization, homomorphism_defects, impose_homomorphism,
                       impose_linearization, solve_homomorphism)
from .recipes import find_recipes
from .transform import (CoordinateChange, ambiguity_witnesses, check_flip_symmetry,
                        identity_change, transport)


class StageFailure(PLQuantError):
    """An invariant re-check failed after a stage completed."""

    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage


@dataclass
class Pipeline:
    deck: Deck
    order: int | None = None
    function_set_from: str | None = None
    fold_trig: bool = False
    symmetrize: bool = False
    timings: dict = dc_field(default_factory=dict)
    coproduct_obstruction: str | None = None

    def _timed(self, name, fn):
        t0 = time.perf_counter()
        out = fn()
        self.timings[name] = round(time.perf_counter() - t0, 3)
        return out

    # -- algebraic stages ---------------------------------------------------------------

    @cached_property
    def bialgebra(self):
        return self.deck.bialgebra()

    @cached_property
    def validation(self):
        rep = validate(self.bialgebra)
        if not rep.ok:
            raise InvalidInput("bialgebra validation failed: " + "; ".join(rep.lines(self.bialgebra.names)))
        return rep

    @cached_property
    def dual(self):
        self.validation
        return dualize(self.bialgebra, self.deck.dual_generators)

    @cached_property
    def primal_coboundary(self):
        return coboundary_solve(self.bialgebra)

    @cached_property
    def dual_coboundary(self):
        return coboundary_solve(self.dual)

    @cached_property
    def representation(self):
        mats = self.deck.representation_matrices()
        if mats is not None:
            return make_representation(self.dual.algebra, mats)
        return adjoint_rep(self.dual.algebra)

    @cached_property
    def group_element(self):
        d = self.deck
        order = [d.generators.index(x) for x in d.order_names]
        coords = [d.order_names.index(g) for g in d.generators]
        return self._timed("group", lambda: build_group_element(self.representation, order, coords, d.space))

    @cached_property
    def recipes(self):
        if self.deck.recipes:
            return list(self.deck.recipes)
        return find_recipes(self.group_element)

    @cached_property
    def coproduct(self):
        delta = self._timed("coproduct", lambda: derive_coproduct(self.group_element, self.recipes))
        bad = [c for c, ok in delta.check_counit().items() if not ok]
        bad += [c for c, ok in delta.check_coassociativity().items() if not ok]
        if bad:
            raise StageFailure("coproduct", f"coproduct axioms fail for {bad}")
        return delta

    @cached_property
    def coproduct_or_none(self):
        """The coproduct, or None when the multiplication law leaves the expression class."""
        try:
            return self.coproduct
        except NonGroupLikeLog as exc:
            self.coproduct_obstruction = str(exc)
            return None

    @cached_property
    def antipode(self):
        return derive_antipode(self.group_element, self.recipes)

    def antipode_ok(self) -> bool:
        return all(e.is_zero() for e in antipode_defects(self.coproduct, self.antipode).values())

    # -- bracket --------------------------------------------------------------------------

    def _function_set_for(self, ref):
        if ref is None:
            return build_function_set(self.group_element, self.coproduct, self.deck.fset_coord_order())
        other = Pipeline(resolve_deck(ref, self.deck.path))
        fs = build_function_set(other.group_element, other.coproduct, other.deck.fset_coord_order())
        return fs.convert(self.deck.space)

    def _ansatz(self, fset):
        d = self.deck
        system = impose_homomorphism(fset, self.coproduct)
        family = solve_homomorphism(system)
        sol = impose_linearization(system, family, self.bialgebra.algebra.c, d.gen_of)
        sol.stats.update(system.stats)
        return sol

    @cached_property
    def solution(self):
        """PLSolution of the Ansatz path, or None for Sklyanin decks."""
        if self.deck.method == "sklyanin":
            return None
        ref = self.function_set_from or self.deck.function_set_from
        t0 = time.perf_counter()
        try:
            sol = self._ansatz(self._function_set_for(ref))
            sol.stats["function_set_source"] = ref or self.deck.name
        except NoSolution:
            if ref is None:
                raise
            sol = self._ansatz(self._function_set_for(None))
            sol.stats["function_set_source"] = f"{self.deck.name} (fallback from {ref})"
        self.timings["pl_bracket"] = round(time.perf_counter() - t0, 3)
        return sol

    @cached_property
    def infinitesimal_solution(self):
        """Ansatz solved under the infinitesimal multiplicativity condition (no coproduct needed)."""
        from .infinitesimal import impose_multiplicativity
        t0 = time.perf_counter()
        fset = build_function_set(self.group_element, self.coproduct_or_none,
                                  self.deck.fset_coord_order())
        system = impose_multiplicativity(fset, self.group_element, self.representation,
                                         self.recipes, self.dual.cocommutator)
        family = solve_homomorphism(system)
        sol = impose_linearization(system, family, self.bialgebra.algebra.c, self.deck.gen_of)
        sol.stats.update(system.stats)
        sol.stats["function_set_source"] = self.deck.name
        self.timings["infinitesimal_ansatz"] = round(time.perf_counter() - t0, 3)
        return sol

    def multiplicativity_defects(self, Q) -> dict:
        from .infinitesimal import multiplicativity_defects
        return multiplicativity_defects(Q, self.group_element, self.representation, self.recipes,
                                        self.dual.cocommutator)

    @cached_property
    def sklyanin_table(self):
        from .sklyanin import sklyanin_bracket
        cb = self.dual_coboundary
        if not cb.is_coboundary:
            raise NoSolution("the dual bialgebra is not a coboundary; no Sklyanin bracket")
        return sklyanin_bracket(self.group_element, self.representation, cb.r, self.recipes)

    @cached_property
    def table(self) -> BracketTable:
        if self.deck.method == "sklyanin":
            Q = self.sklyanin_table
        else:
            Q = self.solution.table
        self._check_bracket(Q, self.coproduct_or_none, "pl-bracket")
        return Q

    def _check_bracket(self, Q, delta, stage):
        d = self.deck
        c = self.bialgebra.algebra.c
        if not check_jacobi(Q):
            raise StageFailure(stage, "solved bracket fails the Jacobi identity")
        if d.coordinate_change is None or stage == "pl-bracket":
            if not check_linearization(Q, c, d.gen_of):
                raise StageFailure(stage, "solved bracket does not linearize to the Lie bracket")
        if delta is None:
            if self.multiplicativity_defects(Q):
                raise StageFailure(stage, "solved bracket is not multiplicative")
        elif homomorphism_defects(Q, delta):
            raise StageFailure(stage, "coproduct is not a Poisson map for the solved bracket")

    # -- coordinate change ----------------------------------------------------------------

    @cached_property
    def change(self) -> CoordinateChange:
        d = self.deck
        if d.coordinate_change is None:
            return identity_change(d.space)
        fwd, inv = d.change_maps()
        return CoordinateChange(d.space, d.primed_space(), fwd, inv).check()

    @cached_property
    def primed(self):
        if self.deck.coordinate_change is None:
            return self.table, self.coproduct_or_none
        Q, delta = transport(self.table, self.coproduct, self.change)
        if not check_jacobi(Q):
            raise StageFailure("transform", "transported bracket fails the Jacobi identity")
        if not all(delta.check_coassociativity().values()):
            raise StageFailure("transform", "transported coproduct is not coassociative")
        if homomorphism_defects(Q, delta):
            raise StageFailure("transform", "transported coproduct is not a Poisson map")
        return Q, delta

    def _negated(self, negate):
        return negate if negate is not None else (self.deck.symmetry_negate or self.deck.params)

    def _specialized(self, delta, specialize):
        if not specialize:
            return delta
        F = self.deck.field
        return delta.substitute_params({k: F(v) for k, v in specialize.items()})

    def symmetry(self, negate=None, specialize=None) -> dict[str, bool]:
        """Flip symmetry of the primed coproduct; ``specialize`` fixes some parameters first."""
        return check_flip_symmetry(self._specialized(self.primed[1], specialize), self._negated(negate))

    def unprimed_symmetry(self, negate=None, specialize=None) -> dict[str, bool]:
        return check_flip_symmetry(self._specialized(self.coproduct, specialize), self._negated(negate))

    # -- quantization -----------------------------------------------------------------------

    def has_cross_method(self) -> bool:
        return self.dual_coboundary.is_coboundary

    def cross_method(self):
        """(Sklyanin table, Ansatz solution, condition) for a coboundary dual.

        The Ansatz side uses the coproduct homomorphism when the deck solves by
        Ansatz, and the invariant-field condition for Sklyanin decks.
        """
        if self.deck.method == "sklyanin":
            return self.sklyanin_table, self.infinitesimal_solution, "infinitesimal multiplicativity"
        return self.sklyanin_table, self.solution, "coproduct homomorphism"

    def quantize_check(self, order=None, coordinates: str = "primed"):
        """Quantize in the primed coordinates (the original ones when no change is shipped)."""
        from .ncquant import quantization_report
        N = self.deck.order if order is None else order
        if coordinates == "primed" and self.deck.coordinate_change is not None:
            which, (Q, delta) = "primed", self.primed
        else:
            which, Q, delta = "original", self.table, self.coproduct
        return which, self._timed("quantize", lambda: quantization_report(Q, delta, N, self.symmetrize))


def build_pipeline(deck_ref: str, **kw) -> Pipeline:
    return Pipeline(resolve_deck(deck_ref), **kw)


__all__ = ["Pipeline", "StageFailure", "build_pipeline", "format_table"]
