#!/usr/bin/env python3
"""Run every shipped deck, compare against its golden and print one line per deck."""

import sys
import time
from pathlib import Path

from plquant.cli import diff_golden, run_report
from plquant.deck import default_deck_dir

ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    bad = 0
    for path in sorted(default_deck_dir().glob("*.json")):
        t0 = time.perf_counter()
        text = run_report(path.stem, fold_trig=True)
        golden = ROOT / "goldens" / f"{path.stem}.txt"
        ok, msg = diff_golden(text, golden.read_text()) if golden.exists() else (False, "no golden")
        fails = sum("FAIL" in line for line in text.splitlines())
        status = "ok" if ok and not fails else "MISMATCH" if not ok else "FAIL lines"
        print(f"{path.stem:28s} {status:10s} {time.perf_counter() - t0:6.1f} s")
        if not ok:
            print("  " + msg.replace("\n", "\n  "))
        bad += status != "ok"
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
