"""Command line front end: ``plquant <command> --deck <deck> [options]``.

Exit codes: 0 success, 2 invalid input or validation failure, 3 solver or
check failure, 4 golden mismatch.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report as R
from .deck import resolve_deck
from .errors import InvalidInput, PLQuantError
from .pipeline import Pipeline

EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_GOLDEN = 0, 2, 3, 4

COMMANDS = ("validate", "dualize", "coboundary", "group", "coproduct", "pl-bracket", "jacobi",
            "transform", "symmetry-check", "quantize-check", "cross-check", "run")


def _function_set(value: str | None) -> str | None:
    if value is None:
        return None
    if not value.startswith("from:"):
        raise argparse.ArgumentTypeError("expected from:<deck>")
    return value[len("from:"):]


def _names(value: str) -> list[str]:
    return [x.strip() for x in value.split(",") if x.strip()]


def _assignments(value: str) -> dict:
    out = {}
    for part in _names(value):
        k, _, v = part.partition("=")
        if not v:
            raise argparse.ArgumentTypeError(f"expected name=value, got {part!r}")
        out[k.strip()] = v.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plquant", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--deck", required=True, help="deck path or shipped deck name")
    common.add_argument("--order", type=int, default=None, help="quantization order N")
    common.add_argument("--fold-trig", action="store_true", help="print exp pairs as cosh/sinh/cos/sin")
    common.add_argument("--function-set", type=_function_set, default=None, metavar="from:<deck>",
                        help="reuse the function set of another deck")
    common.add_argument("--report", type=Path, default=None, help="also write the report here")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--negate", type=_names, default=None,
                        help="parameters negated by the symmetry check, e.g. z,eta")
    common.add_argument("--specialize", type=_assignments, default=None,
                        help="fix parameters before the symmetry check, e.g. eta=0")
    common.add_argument("--symmetrize", action="store_true",
                        help="quantize products as symmetrized words (experimental)")
    common.add_argument("--timings", action="store_true", help="append wall-clock timings")

    for name in COMMANDS:
        sub.add_parser(name, parents=[common])

    g = sub.add_parser("diff-golden", help="compare a report with a golden file")
    g.add_argument("golden", type=Path)
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--report", type=Path, help="existing report file")
    src.add_argument("--deck", help="regenerate the run report for this deck")
    g.add_argument("--fold-trig", action="store_true")
    return ap


def build_report(command: str, p: Pipeline, args) -> R.Report:
    fold = args.fold_trig
    rep = R.Report(f"{command} {p.deck.name}")
    R.deck_section(rep, p)
    if command == "validate":
        R.validate_section(rep, p)
    elif command == "dualize":
        R.dual_section(rep, p)
    elif command == "coboundary":
        R.coboundary_section(rep, p)
    elif command == "group":
        R.group_section(rep, p, fold)
    elif command == "coproduct":
        R.coproduct_section(rep, p, fold)
    elif command == "pl-bracket":
        R.bracket_section(rep, p, fold, args.timings)
    elif command == "jacobi":
        R.checks_section(rep, p)
    elif command == "transform":
        R.transform_section(rep, p, fold)
    elif command == "symmetry-check":
        R.symmetry_section(rep, p, args.negate, args.specialize)
    elif command == "quantize-check":
        R.quantize_section(rep, p, args.order)
    elif command == "cross-check":
        R.cross_method_section(rep, p, fold, args.timings)
    elif command == "run":
        try:
            run_sections(rep, p, args)
        except InvalidInput:
            raise
        except PLQuantError as exc:
            rep.add("stopped", [f"FAIL [{exc.stage}]: {exc}"], "stopped")
    if args.timings:
        R.timings_section(rep, p)
    return rep


def run_sections(rep: R.Report, p: Pipeline, args):
    fold = args.fold_trig
    R.validate_section(rep, p)
    R.dual_section(rep, p)
    R.coboundary_section(rep, p)
    R.group_section(rep, p, fold)
    R.coproduct_section(rep, p, fold)
    R.bracket_section(rep, p, fold, args.timings)
    R.checks_section(rep, p)
    if p.has_cross_method():
        R.cross_method_section(rep, p, fold, args.timings)
    R.transform_section(rep, p, fold)
    R.symmetry_section(rep, p, args.negate, args.specialize)
    order = args.order if args.order is not None else p.deck.order
    if order is not None and p.coproduct_or_none is None:
        rep.add("quantization", ["skipped: no closed-form coproduct"], "quantization")
    elif order is not None:
        R.quantize_section(rep, p, order)


def run_report(deck: str, fold_trig: bool = True, **kw) -> str:
    """Text of the full ``run`` report; used by the golden tests and scripts."""
    args = argparse.Namespace(fold_trig=fold_trig, timings=False, negate=None, specialize=None,
                              order=kw.pop("order", None), symmetrize=False, function_set=None)
    p = Pipeline(resolve_deck(deck), fold_trig=fold_trig, **kw)
    return build_report("run", p, args).text()


# -- golden comparison ---------------------------------------------------------------------

def _normalized(text: str) -> list[str]:
    return [" ".join(line.split()) for line in text.splitlines() if line.strip()]


def diff_golden(report_text: str, golden_text: str) -> tuple[bool, str]:
    """Whitespace-insensitive, order-sensitive comparison; returns (ok, first divergence)."""
    a, b = _normalized(report_text), _normalized(golden_text)
    for k, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return False, f"first divergence at line {k + 1}:\n  report: {x}\n  golden: {y}"
    if len(a) != len(b):
        k = min(len(a), len(b))
        extra = "report" if len(a) > len(b) else "golden"
        line = (a if len(a) > len(b) else b)[k]
        return False, f"first divergence at line {k + 1}: only the {extra} has\n  {line}"
    return True, "match"


def _cmd_diff_golden(args) -> int:
    golden = args.golden.read_text()
    if args.report is not None:
        text = args.report.read_text()
    else:
        text = run_report(args.deck, fold_trig=args.fold_trig)
    ok, msg = diff_golden(text, golden)
    print("golden: pass" if ok else f"golden: FAIL\n{msg}")
    return EXIT_OK if ok else EXIT_GOLDEN


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "diff-golden":
            return _cmd_diff_golden(args)
        deck = resolve_deck(args.deck)
        p = Pipeline(deck, order=args.order, function_set_from=args.function_set,
                     fold_trig=args.fold_trig, symmetrize=args.symmetrize)
        rep = build_report(args.command, p, args)
    except InvalidInput as exc:
        print(f"error [{exc.stage}]: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PLQuantError as exc:
        print(f"error [{exc.stage}]: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    text = rep.json() if args.json else rep.text()
    sys.stdout.write(text)
    if args.report is not None:
        args.report.write_text(text)
    failed = any("FAIL" in line for _, lines in rep.sections for line in lines)
    return EXIT_SOLVER if failed else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
