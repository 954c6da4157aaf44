"""JSON input decks.

A deck names the parameters, the Lie algebra g with its cocommutator (or an
r-matrix generating it), the coordinate paired with each dual generator, and
optional overrides: representation, exponential order, recipes, a coordinate
change, a reused function set and the quantization order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .bialgebra import (LieBialgebra, cocommutator_from_r, make_bialgebra, r_matrix,
                        toggle_name)
from .errors import InvalidInput
from .expr import Space, get_space
from .parse import parse_expr, parse_scalar
from .recipes import Recipe
from .scalar import ScalarField, get_field

KNOWN_KEYS = {
    "name", "description", "parameters", "generators", "dual_generators", "coordinates",
    "brackets", "cocommutator", "r_matrix", "representation", "exp_order",
    "function_set_order", "recipes", "coordinate_change", "function_set", "order",
    "method", "symmetry_negate", "symmetry_specialize",
}


@dataclass
class CoordinateChangeSpec:
    forward: dict[str, str]
    inverse: dict[str, str]
    primed_coords: tuple[str, ...]


@dataclass
class Deck:
    name: str
    params: tuple[str, ...]
    generators: tuple[str, ...]
    dual_generators: tuple[str, ...]
    coordinates: dict[str, str]            # generator -> coordinate name
    brackets: list
    cocommutator: list | None
    r_matrix: list | None
    representation: dict | None = None
    exp_order: tuple[str, ...] | None = None
    function_set_order: tuple[str, ...] | None = None
    recipes: list[Recipe] = dc_field(default_factory=list)
    coordinate_change: CoordinateChangeSpec | None = None
    function_set_from: str | None = None
    order: int | None = 4            # None: no quantization check
    method: str = "ansatz"
    symmetry_negate: tuple[str, ...] | None = None
    path: Path | None = None
    raw: dict = dc_field(default_factory=dict, repr=False)
    symmetry_specialize: dict | None = None   # extra symmetry pass with these parameters fixed

    # -- derived data --------------------------------------------------------------

    @property
    def field(self) -> ScalarField:
        return get_field(self.params)

    @property
    def order_names(self) -> tuple[str, ...]:
        return self.exp_order or self.generators

    @property
    def coord_names(self) -> tuple[str, ...]:
        """Coordinates in exponential order; this fixes the index of every X_i."""
        return tuple(self.coordinates[g] for g in self.order_names)

    @property
    def space(self) -> Space:
        return get_space(self.params, self.coord_names)

    @property
    def gen_of(self) -> list[int]:
        return [self.generators.index(g) for g in self.order_names]

    def fset_coord_order(self) -> list[str]:
        if self.function_set_order:
            return list(self.function_set_order)
        return [self.coordinates[g] for g in self.generators]

    def primed_space(self) -> Space:
        if self.coordinate_change is None:
            return self.space
        return get_space(self.params, self.coordinate_change.primed_coords)

    def bialgebra(self) -> LieBialgebra:
        F = self.field
        idx = {g: k for k, g in enumerate(self.generators)}

        def gen(x):
            if isinstance(x, int):
                return x
            if x not in idx:
                raise InvalidInput(f"deck {self.name}: unknown generator {x!r}")
            return idx[x]

        brackets: dict = {}
        for entry in self.brackets:
            i, j = (gen(x) for x in entry["pair"])
            res = brackets.setdefault((i, j), {})
            for t in entry["result"]:
                k = gen(t["gen"])
                res[k] = res.get(k, F.zero) + parse_scalar(str(t["coeff"]), F)
        cob: dict = {}
        for entry in self.cocommutator or []:
            i = gen(entry["gen"])
            res = cob.setdefault(i, {})
            for t in entry["result"]:
                j, k = (gen(x) for x in t["pair"])
                res[(j, k)] = res.get((j, k), F.zero) + parse_scalar(str(t["coeff"]), F)
        b = make_bialgebra(self.generators, F, brackets, cob, self.name)
        if self.r_matrix is not None:
            if self.cocommutator:
                raise InvalidInput(f"deck {self.name}: give either cocommutator or r_matrix")
            r = self.r_object()
            b = LieBialgebra(b.algebra, cocommutator_from_r(b.algebra, r), self.name)
        return b

    def r_object(self):
        F = self.field
        wedges: dict = {}
        for t in self.r_matrix or []:
            a, b = (self.generators.index(x) if isinstance(x, str) else x for x in t["pair"])
            wedges[(a, b)] = wedges.get((a, b), F.zero) + parse_scalar(str(t["coeff"]), F)
        return r_matrix(F, len(self.generators), wedges)

    def representation_matrices(self) -> dict | None:
        """Dual-generator name -> matrix of Scalars, or None for the adjoint."""
        if not self.representation:
            return None
        F = self.field
        mats = {}
        for key, M in self.representation["matrices"].items():
            name = key
            if key in self.generators:
                name = self.dual_generators[self.generators.index(key)]
            if name not in self.dual_generators:
                raise InvalidInput(f"deck {self.name}: representation names unknown generator {key!r}")
            mats[name] = [[parse_scalar(str(x), F) for x in row] for row in M]
        dim = self.representation.get("dimension")
        if dim is not None and any(len(M) != dim for M in mats.values()):
            raise InvalidInput(f"deck {self.name}: representation matrices must be {dim}x{dim}")
        return mats

    def change_maps(self):
        """(forward, inverse) as Expr maps: primed coords in terms of old, and back."""
        cc = self.coordinate_change
        old, new = self.space, self.primed_space()
        both = get_space(self.params, tuple(dict.fromkeys(old.coords + new.coords)))
        fwd = {k: parse_expr(v, both).convert(old) for k, v in cc.forward.items()}
        inv = {k: parse_expr(v, both).convert(new) for k, v in cc.inverse.items()}
        return fwd, inv


def _names(raw, key, required=True):
    val = raw.get(key)
    if val is None:
        if required:
            raise InvalidInput(f"deck is missing {key!r}")
        return None
    if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
        raise InvalidInput(f"deck key {key!r} must be a list of names")
    return tuple(val)


def deck_from_dict(raw: dict, path: Path | None = None) -> Deck:
    unknown = set(raw) - KNOWN_KEYS
    if unknown:
        raise InvalidInput(f"unknown deck keys: {sorted(unknown)}")
    name = raw.get("name") or (path.stem if path else "deck")
    params = _names(raw, "parameters", required=False) or ()
    gens = _names(raw, "generators")
    if len(set(gens)) != len(gens):
        raise InvalidInput("generator names must be distinct")
    dual = _names(raw, "dual_generators", required=False) or tuple(toggle_name(g) for g in gens)
    coords = raw.get("coordinates")
    if isinstance(coords, list):
        coords = dict(zip(gens, coords))
    if not isinstance(coords, dict) or set(coords) != set(gens):
        raise InvalidInput("coordinates must pair every generator with a coordinate name")
    if len(set(coords.values())) != len(gens):
        raise InvalidInput("coordinate names must be distinct")
    exp_order = _names(raw, "exp_order", required=False)
    if exp_order is not None and sorted(exp_order) != sorted(gens):
        raise InvalidInput("exp_order must be a permutation of the generators")
    fso = _names(raw, "function_set_order", required=False)
    if fso is not None and sorted(fso) != sorted(coords.values()):
        raise InvalidInput("function_set_order must be a permutation of the coordinates")
    if "cocommutator" not in raw and "r_matrix" not in raw:
        raise InvalidInput("deck needs a cocommutator or an r_matrix")
    recipes = [Recipe(r["target"], r["body"]) for r in raw.get("recipes", [])]
    cc = None
    if "coordinate_change" in raw:
        c = raw["coordinate_change"]
        if "forward" not in c or "inverse" not in c:
            raise InvalidInput("coordinate_change needs forward and inverse maps")
        primed = tuple(c.get("coordinates") or
                       (coords[g] + "'" if coords[g] + "'" in c["forward"] else coords[g]
                        for g in (exp_order or gens)))
        cc = CoordinateChangeSpec(dict(c["forward"]), dict(c["inverse"]), primed)
    fs = raw.get("function_set")
    fs_from = None
    if fs is not None:
        if not isinstance(fs, dict) or "from" not in fs:
            raise InvalidInput("function_set must be {\"from\": <deck name>}")
        fs_from = fs["from"]
    order = raw.get("order", 4)
    if order is not None and (not isinstance(order, int) or order < 0):
        raise InvalidInput("order must be a nonnegative integer or null")
    method = raw.get("method", "ansatz")
    if method not in ("ansatz", "sklyanin"):
        raise InvalidInput("method must be 'ansatz' or 'sklyanin'")
    neg = _names(raw, "symmetry_negate", required=False)
    spec = raw.get("symmetry_specialize")
    if spec is not None:
        if not isinstance(spec, dict) or not set(spec) <= set(params):
            raise InvalidInput("symmetry_specialize must map deck parameters to values")
        spec = {k: str(v) for k, v in spec.items()}
    return Deck(name, params, gens, dual, dict(coords), raw.get("brackets", []),
                raw.get("cocommutator"), raw.get("r_matrix"), raw.get("representation"),
                exp_order, fso, recipes, cc, fs_from, order, method, neg, path, raw,
                symmetry_specialize=spec)


def load_deck(path) -> Deck:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise InvalidInput(f"deck file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"deck {path} is not valid JSON: {exc}") from None
    return deck_from_dict(raw, path)


def resolve_deck(ref: str, relative_to: Path | None = None) -> Deck:
    """Load a deck by path or by bare name looked up next to ``relative_to``."""
    p = Path(ref)
    if p.suffix != ".json":
        p = p.with_suffix(".json")
    candidates = [p]
    if relative_to is not None:
        candidates.insert(0, relative_to.parent / p.name)
    candidates.append(default_deck_dir() / p.name)
    for c in candidates:
        if c.exists():
            return load_deck(c)
    raise InvalidInput(f"deck {ref!r} not found")


def default_deck_dir() -> Path:
    return Path(__file__).resolve().parents[2] / "decks"
