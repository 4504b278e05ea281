"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 parse error, 3 semantic
error (unknown relation, arity, fragment, size or kind mismatch, unknown id).

Structures are read from files in the ``universe``/``rel``/``end`` format;
``catalog:NAME`` (for instance ``catalog:~H8``) names a built-in structure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

from . import catalog
from .canons import canon_report
from .classifier import ClassifierError, CrossCheckError, classification_table, classify_boolean, classify_digraph
from .evaluator import EvaluationError, evaluate
from .logic import DIGRAPH, FULL, POSITIVE, FormulaSyntaxError, SemanticError, parse_formula, render_formula
from .reductions import ReductionError, RewriteRule, check_gadget, gadget, parse_gadget, reduce_sentence
from .structures import Structure, StructureError, parse_structure, render_structure
from .verify import FULL as FULL_PROFILE
from .verify import QUICK, SUITES, Profile, run_suites

OK, FAILED, PARSE, SEMANTIC = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}", PARSE) from None


def load_structure(ref: str) -> Structure:
    if ref.startswith("catalog:"):
        try:
            return catalog.structure(ref.split(":", 1)[1])
        except catalog.CatalogError as e:
            raise CliError(str(e).strip("'\""), SEMANTIC) from None
    try:
        return parse_structure(_read(ref))
    except StructureError as e:
        raise CliError(f"{ref}: {e}", PARSE) from None


def _formula_text(args) -> str:
    if args.formula_file:
        if args.formula is not None:
            raise CliError("give either a formula or --formula-file, not both", PARSE)
        return _read(args.formula_file)
    if args.formula is None:
        raise CliError("give a formula or --formula-file", PARSE)
    return args.formula


def _add_formula_source(p: argparse.ArgumentParser) -> None:
    # not a mutually exclusive group: those block parse_intermixed_args
    p.add_argument("formula", nargs="?", help="formula text")
    p.add_argument("--formula-file", "-f", help="read the formula from a file (excludes FORMULA)")


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args, out) -> int:
    s = load_structure(args.structure)
    frag = FULL if args.negation else POSITIVE
    phi = parse_formula(_formula_text(args), s.sig, frag)
    print("true" if evaluate(s, phi) else "false", file=out)
    return OK


def cmd_classify(args, out) -> int:
    s = load_structure(args.structure)
    if args.kind == "boolean":
        if s.size != 2:
            raise CliError(f"boolean structures have universe size 2, got {s.size}", SEMANTIC)
        verdict, cert = classify_boolean(s)
    else:
        if s.sig != DIGRAPH:
            raise CliError(f"a digraph has the single relation E/2, got {s.sig}", SEMANTIC)
        verdict, cert = classify_digraph(s.as_digraph())
    if args.json:
        print(cert.to_json(), file=out)
    else:
        print(verdict.value, file=out)
        print(cert.to_text(), file=out)
    return OK


def cmd_reduce(args, out) -> int:
    try:
        rule = RewriteRule.parse(args.rule)
        sig = rule.input_signature()
    except ReductionError as e:
        raise CliError(str(e), SEMANTIC) from None
    phi = parse_formula(_formula_text(args), sig)
    print(render_formula(reduce_sentence(rule, phi)), file=out)
    return OK


def cmd_define(args, out) -> int:
    s = load_structure(args.structure)
    if args.gadget_file:
        g = parse_gadget(_read(args.gadget_file), args.gadget_file, s.sig)
    else:
        g = gadget(args.gadget)
    check = check_gadget(g, s)
    if check.expected is not None:
        verdict = "yes" if check.ok else "no"
        print(f"# {g.name}: isomorphic to {check.expected}: {verdict}", file=out)
    out.write(render_structure(check.result))
    return OK


def cmd_canons(args, out) -> int:
    s = load_structure(args.structure)
    if s.sig != DIGRAPH:
        raise CliError("canons are defined for digraphs", SEMANTIC)
    report = canon_report(s.as_digraph())
    if args.json:
        print(json.dumps(report.to_dict(), sort_keys=True), file=out)
    else:
        d = report.to_dict()
        print("forall-canons: " + " ".join(map(str, d["forall_canons"])), file=out)
        print("exists-canons: " + " ".join(map(str, d["exists_canons"])), file=out)
        print("good pairs: " + " ".join(f"({x},{y})" for x, y in d["good_pairs"]), file=out)
    return OK


def cmd_table(args, out) -> int:
    try:
        rows = classification_table(args.size, up_to_iso=args.up_to_iso)
    except CrossCheckError as e:
        edges = sorted(e.digraph.edges) if e.digraph is not None else "?"
        print(f"cross-check failed: {e} on edges {edges}", file=sys.stderr)
        return FAILED
    if args.format == "json":
        print(json.dumps([r.to_dict() for r in rows], indent=1), file=out)
        return OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["code", "edges", "class", "rule"])
    for r in rows:
        w.writerow([r.code, ";".join(f"{x}>{y}" for x, y in sorted(r.digraph.edges)), r.verdict.value, r.certificate.rule])
    out.write(buf.getvalue())
    return OK


def cmd_verify(args, out) -> int:
    base = QUICK if args.quick else FULL_PROFILE
    profile = Profile(**{**base.__dict__, "seed": args.seed})
    try:
        results = run_suites([args.suite], profile)
    except KeyError as e:
        raise CliError(str(e).strip("'\""), SEMANTIC) from None
    if args.json:
        print(json.dumps([r.to_dict() for r in results], indent=1), file=out)
    else:
        for r in results:
            print(r.line(args.timings), file=out)
        failed = sum(not r.passed for r in results)
        print(f"{len(results) - failed}/{len(results)} properties passed", file=out)
    return OK if all(r.passed for r in results) else FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="posmc", description="Model checking and complexity classification for positive equality-free logic.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="decide whether a structure satisfies a sentence")
    e.add_argument("structure", help="structure file or catalog:NAME")
    _add_formula_source(e)
    e.add_argument("--negation", action="store_true", help="allow '~' in the formula")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("classify", help="complexity of model checking for a fixed structure")
    c.add_argument("kind", choices=["boolean", "digraph"])
    c.add_argument("structure")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)

    r = sub.add_parser("reduce", help="rewrite a sentence with a reduction rule")
    r.add_argument("--rule", required=True, help="dual, symclos, doub, tranclos:N, nae_to_k2 or gadget:NAME")
    _add_formula_source(r)
    r.set_defaults(func=cmd_reduce)

    d = sub.add_parser("define", help="interpret a gadget over a structure")
    d.add_argument("structure")
    gg = d.add_mutually_exclusive_group(required=True)
    gg.add_argument("--gadget", help="catalog gadget name")
    gg.add_argument("--gadget-file", help="gadget file: host line, vars line, formula")
    d.set_defaults(func=cmd_define)

    k = sub.add_parser("canons", help="forall-canons, exists-canons and good pairs of a digraph")
    k.add_argument("structure")
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_canons)

    t = sub.add_parser("table", help="classify every digraph of a given size")
    t.add_argument("--size", type=int, default=3, choices=[1, 2, 3])
    t.add_argument("--up-to-iso", action="store_true")
    t.add_argument("--format", choices=["csv", "json"], default="csv")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="run empirical verification suites")
    v.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    v.add_argument("--seed", type=int, default=0, help="seed for the random sentence suites")
    v.add_argument("--quick", action="store_true", help="smaller sentence suites")
    v.add_argument("--timings", action="store_true", help="print wall time per property")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    p.subcommands = sub.choices
    return p


# subcommands whose optional formula positional may follow flags
_INTERMIXED = ("eval", "reduce")


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if argv and argv[0] in _INTERMIXED:
        args = parser.subcommands[argv[0]].parse_intermixed_args(argv[1:])
        args.command = argv[0]
        return args
    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = parse_args(argv)
    try:
        return args.func(args, out)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except FormulaSyntaxError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return PARSE
    except (SemanticError, EvaluationError, ClassifierError, catalog.CatalogError) as e:
        msg = e.args[0] if e.args else str(e)
        print(f"error: {msg}", file=sys.stderr)
        return SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
