"""Command-line front end: ``lfgkit parse|transfer|test``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from lfgkit.avm import canonical_form
from lfgkit.chart import Chart, parse_cstructure
from lfgkit.engine import solve, tokenize
from lfgkit.exceptions import LFGError
from lfgkit.fragments import data_path
from lfgkit.grammar import load_grammar_file
from lfgkit.linking import BilingualLexicon, transfer_analysis
from lfgkit.suite import load_suite, run_suite

OK, NO_RESULT, ERROR = 0, 1, 2
PROJECTIONS = ("c", "f", "m")


def _resolve(path: str) -> Path:
    """A file path, falling back to the files shipped with the package."""
    p = Path(path)
    if p.exists():
        return p
    for name in (path, path + ".lfg"):
        shipped = data_path(name)
        if shipped.exists():
            return shipped
    raise LFGError(f"no such file: {path}")


def _grammar(args):
    g = load_grammar_file(_resolve(args.grammar))
    if getattr(args, "max_depth", None) is not None:
        g = g.with_depth(args.max_depth)
    return g


def _show(value: str) -> list[str]:
    wanted = [s.strip() for s in value.split(",") if s.strip()]
    bad = [s for s in wanted if s not in PROJECTIONS]
    if bad or not wanted:
        raise argparse.ArgumentTypeError(f"--show takes a comma list of {', '.join(PROJECTIONS)}")
    return wanted


def _analyses(grammar, sentence, diag, out):
    """Analyses of ``sentence``; prints no-parse/no-analysis when empty."""
    tokens = tokenize(sentence)
    trees = parse_cstructure(tokens, grammar)
    if not trees:
        span = Chart(tokens, grammar).best_partial() if tokens else None
        hint = f" (widest constituent {span[0]} over tokens {span[1]}-{span[2]})" if span else ""
        print(f"no-parse{hint}", file=out)
        return []
    notes: list[str] = []
    result = []
    for tree in trees:
        result.extend(solve(tree, grammar, diagnostics=notes))
    if diag:
        for note in notes:
            print(f"diag: {note}", file=sys.stderr)
    if not result:
        print(f"no-analysis ({len(trees)} c-structure{'s' if len(trees) != 1 else ''}, all rejected)", file=out)
    return result


def cmd_parse(args, out=None) -> int:
    out = out or sys.stdout
    grammar = _grammar(args)
    analyses = _analyses(grammar, args.sentence, args.diag, out)
    if args.json:
        payload = [
            {
                "c": a.ctree.bracketed(),
                "f": canonical_form(a.fstruct),
                "m": canonical_form(a.mstruct),
                "readings": [str(r) for r in a.readings],
            }
            for a in analyses
        ]
        print(json.dumps(payload, indent=2, ensure_ascii=False), file=out)
        return OK if analyses else NO_RESULT
    for i, a in enumerate(analyses, 1):
        print(f"analysis {i}", file=out)
        if a.trace:
            print("  disjuncts " + " ".join(f"{form}#{idx}" for form, idx in a.trace), file=out)
        rendered = {"c": a.ctree.bracketed(), "f": canonical_form(a.fstruct), "m": canonical_form(a.mstruct)}
        for key in args.show:
            print(f"  {key} {rendered[key]}", file=out)
        for r in a.readings:
            print(f"  reading {r}", file=out)
    return OK if analyses else NO_RESULT


def cmd_transfer(args, out=None) -> int:
    out = out or sys.stdout
    grammar = _grammar(args)
    blex = BilingualLexicon.load(_resolve(args.blex))
    analyses = _analyses(grammar, args.sentence, args.diag, out)
    produced = []
    for i, a in enumerate(analyses, 1):
        for j, result in enumerate(transfer_analysis(a.fstruct, blex), 1):
            if isinstance(result, LFGError):
                print(f"analysis {i} reading {j}: {result}", file=sys.stderr)
            else:
                produced.append(canonical_form(result))
    if args.json:
        print(json.dumps(produced, indent=2, ensure_ascii=False), file=out)
    else:
        for text in produced:
            print(text, file=out)
    if analyses and not produced:
        print("no-transfer", file=out)
    return OK if produced else NO_RESULT


def cmd_test(args, out=None) -> int:
    out = out or sys.stdout
    grammar = _grammar(args)
    blex = BilingualLexicon.load(_resolve(args.blex)) if args.blex else None
    all_ok = True
    for suite in args.suite:
        path = _resolve(suite)
        items = load_suite(path)
        report = run_suite(items, grammar, blex, base_dir=path.parent)
        print(f"suite {suite}", file=out)
        for line in report.lines():
            print(line, file=out)
        all_ok = all_ok and report.ok
    return OK if all_ok else NO_RESULT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lfgkit", description="LFG parsing with f- and m-structure projections.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("-g", "--grammar", required=True, help="grammar file (or name of a shipped fragment: flat, raising, np)")
        p.add_argument("--max-depth", type=int, metavar="K", help="override the functional uncertainty bound")

    p = sub.add_parser("parse", help="analyze one sentence")
    common(p)
    p.add_argument("-s", "--sentence", required=True)
    p.add_argument("--show", type=_show, default=list(PROJECTIONS), help="projections to print, e.g. c,f,m")
    p.add_argument("--diag", action="store_true", help="report why discarded candidates failed")
    p.add_argument("--json", action="store_true", help="print analyses as a JSON array")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("transfer", help="analyze and transfer one sentence")
    common(p)
    p.add_argument("-x", "--blex", required=True, help="bilingual lexicon file")
    p.add_argument("-s", "--sentence", required=True)
    p.add_argument("--diag", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("test", help="run testsuites")
    common(p)
    p.add_argument("-x", "--blex", help="bilingual lexicon for transfer goldens")
    p.add_argument("suite", nargs="+")
    p.set_defaults(func=cmd_test)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (LFGError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
