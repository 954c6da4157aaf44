#!/usr/bin/env python3
"""Regenerate goldens/<deck>.txt from the full run report of every shipped deck."""

import argparse
import sys
import time
from pathlib import Path

from plquant.cli import run_report
from plquant.deck import default_deck_dir

ROOT = Path(__file__).resolve().parents[1]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("decks", nargs="*", help="deck names (default: all shipped decks)")
    ap.add_argument("--out", type=Path, default=ROOT / "goldens")
    args = ap.parse_args(argv)
    names = args.decks or sorted(p.stem for p in default_deck_dir().glob("*.json"))
    args.out.mkdir(parents=True, exist_ok=True)
    for name in names:
        t0 = time.perf_counter()
        text = run_report(name, fold_trig=True)
        (args.out / f"{name}.txt").write_text(text)
        print(f"{name}: {len(text.splitlines())} lines, {time.perf_counter() - t0:.1f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
