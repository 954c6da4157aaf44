import json
from pathlib import Path

import pytest

from plquant.cli import EXIT_GOLDEN, EXIT_INVALID, EXIT_OK, EXIT_SOLVER, diff_golden, main, run_report
from plquant.deck import default_deck_dir

GOLDENS = Path(__file__).resolve().parents[1] / "goldens"


def _deck_raw(name):
    return json.loads((default_deck_dir() / f"{name}.json").read_text())


def test_run_small_deck(capsys):
    assert main(["run", "--deck", "sl2_standard", "--fold-trig"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "{Jp, Jm} = " in out and "== quantization ==" in out


@pytest.mark.parametrize("command", ["validate", "dualize", "coboundary", "group", "coproduct",
                                     "pl-bracket", "jacobi", "transform", "symmetry-check",
                                     "cross-check"])
def test_subcommands_succeed(command, capsys):
    assert main([command, "--deck", "sl2_standard"]) == EXIT_OK
    assert f"# {command} sl2_standard" in capsys.readouterr().out


def test_quantize_check_order(capsys):
    assert main(["quantize-check", "--deck", "sl2_standard", "--order", "2"]) == EXIT_OK
    assert "order: 2" in capsys.readouterr().out


def test_json_output(capsys):
    assert main(["dualize", "--deck", "sl2_standard", "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data


def test_report_file(tmp_path, capsys):
    target = tmp_path / "out.txt"
    assert main(["group", "--deck", "sl2_standard", "--report", str(target)]) == EXIT_OK
    assert target.read_text() == capsys.readouterr().out


def test_missing_deck_is_invalid(capsys):
    assert main(["validate", "--deck", "no_such_deck"]) == EXIT_INVALID


def test_broken_cocycle_is_invalid(tmp_path, capsys):
    raw = _deck_raw("sl2_undeformed")
    raw["parameters"] = ["z"]
    raw["cocommutator"] = [{"gen": "jp", "result": [{"pair": ["j3", "jm"], "coeff": "z"}]}]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(raw))
    assert main(["validate", "--deck", str(path)]) == EXIT_INVALID
    assert "cocycle" in capsys.readouterr().err


def test_unknown_key_is_invalid(tmp_path, capsys):
    raw = dict(_deck_raw("sl2_standard"), colour="blue")
    path = tmp_path / "extra.json"
    path.write_text(json.dumps(raw))
    assert main(["validate", "--deck", str(path)]) == EXIT_INVALID


def test_missing_coproduct_is_solver_failure(capsys):
    assert main(["quantize-check", "--deck", "book_via_sklyanin"]) == EXIT_SOLVER
    assert "error [coproduct]" in capsys.readouterr().err


def test_diff_golden_pass(capsys):
    golden = GOLDENS / "sl2_standard.txt"
    assert main(["diff-golden", str(golden), "--deck", "sl2_standard", "--fold-trig"]) == EXIT_OK


def test_diff_golden_unfolded_fails(capsys):
    golden = GOLDENS / "sl2_standard.txt"
    assert main(["diff-golden", str(golden), "--deck", "sl2_standard"]) == EXIT_GOLDEN
    assert "first divergence" in capsys.readouterr().out


def test_diff_golden_wrong_deck(tmp_path, capsys):
    other = tmp_path / "so22.txt"
    other.write_text(run_report("so22_drinfeld_jimbo"))
    golden = GOLDENS / "sl2_standard.txt"
    assert main(["diff-golden", str(golden), "--report", str(other)]) == EXIT_GOLDEN


def test_diff_is_whitespace_insensitive():
    ok, _ = diff_golden("a  b\n\nc\n", "a b\nc")
    assert ok
    ok, msg = diff_golden("a b\nc d\n", "a b\nd c\n")
    assert not ok and "line 2" in msg
