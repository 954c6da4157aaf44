import json

import pytest

from plquant.deck import deck_from_dict, default_deck_dir, resolve_deck
from plquant.errors import InvalidInput


def _raw(name):
    return json.loads((default_deck_dir() / f"{name}.json").read_text())


def test_resolve_by_name_and_path():
    a = resolve_deck("sl2_standard")
    b = resolve_deck(str(default_deck_dir() / "sl2_standard.json"))
    assert a.name == b.name == "sl2_standard"


def test_shipped_deck_names_match_files():
    for path in default_deck_dir().glob("*.json"):
        assert resolve_deck(str(path)).name == path.stem


@pytest.mark.parametrize("mutate, message", [
    (lambda r: r.update(generators=["j3", "j3", "jm"]), "distinct"),
    (lambda r: r.update(order=-1), "order"),
    (lambda r: r.update(method="guess"), "method"),
    (lambda r: r.update(exp_order=["j3", "jp"]), "exp_order"),
    (lambda r: r.pop("cocommutator"), "cocommutator"),
    (lambda r: r.update(symmetry_specialize={"q": "0"}), "symmetry_specialize"),
])
def test_bad_decks_are_rejected(mutate, message):
    raw = _raw("book_via_sklyanin")
    mutate(raw)
    with pytest.raises(InvalidInput, match=message):
        deck_from_dict(raw)


def test_twisted_deck_reuses_function_set():
    d = resolve_deck("kappa_poincare_twisted")
    assert d.function_set_from == "kappa_poincare"
    assert d.symmetry_specialize == {"eta": "0"}
