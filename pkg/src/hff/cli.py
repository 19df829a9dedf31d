"""Command line front end.

Exit codes: 0 success, 2 parse error, 3 semantic error, 4 resource bound.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import hfset
from .claims import SCALES, report_json, run_report
from .constructible import MAX_LEVEL, lhier
from .errors import (
    FormulaSyntaxError, HffError, LevelBoundError, ResourceLimitError,
)
from .folang import FiniteModel, Not, evaluate, find_witness, parse, to_text
from .forcing import (
    CohenCondition, ForcingSetup, classify_sites, cohen_poset, ground_model,
)

EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC, EXIT_RESOURCE = 0, 2, 3, 4


class ParseFailure(Exception):
    pass


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2)


def _load_model(path, max_rank=None):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseFailure(f"{path}: invalid JSON: {exc}") from None
    try:
        model = FiniteModel.from_json(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseFailure(f"{path}: not a model: {exc}") from None
    if max_rank is not None:
        for x in model.domain:
            if hfset.rank(x) > max_rank:
                raise ResourceLimitError(f"element {x} has rank {hfset.rank(x)} > --max-rank {max_rank}")
    return model


def _parse_assign(items):
    out = {}
    for item in items or ():
        var, sep, literal = item.partition("=")
        if not sep or not var.strip():
            raise ParseFailure(f"assignment must look like var=SET, got {item!r}")
        out[var.strip()] = hfset.parse_set(literal)
    return out


def cmd_eval(args):
    model = _load_model(args.model, args.max_rank)
    f = parse(args.formula)
    asg = _parse_assign(args.assign)
    value = evaluate(model, f, asg)
    witness = find_witness(model, f, asg) if args.trace else None
    if args.json:
        out = {"formula": to_text(f), "value": value}
        if args.trace:
            out["witness"] = None if witness is None else str(witness)
        print(_dump(out))
    else:
        print("true" if value else "false")
        if witness is not None:
            role = "witness" if value else "counterexample"
            print(f"{role}: {f.var} = {witness}")
    return EXIT_OK


def cmd_lhier(args):
    if args.levels > MAX_LEVEL:
        raise LevelBoundError(f"--levels {args.levels} exceeds the maximum {MAX_LEVEL}")
    print(_dump(lhier(args.levels, with_witnesses=args.witnesses)))
    return EXIT_OK


def cmd_force(args):
    notion = cohen_poset(args.bits)
    setup = ForcingSetup(notion, ground_model(args.ground_level))
    s = parse(args.sentence)
    conditions = list(notion.conditions)
    if args.condition is not None:
        try:
            p = CohenCondition.parse(args.condition)
        except ValueError as exc:
            raise ParseFailure(str(exc)) from None
        if p not in notion:
            raise HffError(f"{p} is not a condition of the Cohen poset with {args.bits} bits")
        conditions = [p]
    rows = [{"condition": str(p), "forces": setup.forces(p, s),
             "forces_negation": setup.forces(p, Not(s))} for p in conditions]
    generics = []
    truth_ok = True
    for g in setup.generics():
        v = setup.check_truth_lemma(s, g)
        truth_ok &= v.passed
        generics.append({"generator": str(g.generator), "true": v.details["true"],
                         "truth_lemma": v.passed})
    negation = setup.check_negation_lemma(s)
    out = {"sentence": to_text(s), "bits": args.bits, "conditions": rows, "generics": generics,
           "truth_lemma": truth_ok, "negation_lemma": negation.passed}
    if args.json:
        print(_dump(out))
    else:
        print(f"sentence: {out['sentence']}")
        for r in rows:
            mark = "forces" if r["forces"] else ("forces negation" if r["forces_negation"] else "undecided")
            print(f"  {r['condition']:<12} {mark}")
        for g in generics:
            print(f"  G from {g['generator']:<12} {'true' if g['true'] else 'false'}")
        print(f"truth lemma: {'pass' if truth_ok else 'FAIL'}; "
              f"negation lemma: {'pass' if negation.passed else 'FAIL'}")
    return EXIT_OK


def cmd_sites(args):
    model = _load_model(args.model, args.max_rank)
    kind, sites = classify_sites(model)
    out = {"classification": kind,
           "sites": [{"site": str(x), "outside_members": [str(y) for y in x]} for x in sites]}
    if args.json:
        print(_dump(out))
    else:
        print(f"{kind}: {len(sites)} site(s)")
        for entry in out["sites"]:
            print(f"  {entry['site']}  members outside the domain: {', '.join(entry['outside_members'])}")
    return EXIT_OK


def cmd_report(args):
    depth = 2 if args.max_depth is None else args.max_depth
    if depth < 1:
        raise HffError("--max-depth must be at least 1")
    results = run_report(args.seed, args.scale, depth)
    print(_dump(report_json(results, args.seed, args.scale, timings=args.timings)))
    return EXIT_OK if all(r.verdict != "fail" for r in results) else EXIT_SEMANTIC


def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--max-rank", type=int, default=argparse.SUPPRESS)
    common.add_argument("--max-depth", type=int, default=argparse.SUPPRESS)
    return common


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="hff", parents=[common],
                                     description="Finite set theory and forcing laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula over a JSON model")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--assign", action="append", metavar="VAR=SET")
    p.add_argument("--trace", action="store_true", help="report the quantifier witness")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("lhier", parents=[common], help="constructible levels against V levels")
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--witnesses", action="store_true")
    p.set_defaults(func=cmd_lhier)

    p = sub.add_parser("force", parents=[common], help="forcing table for a sentence")
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--sentence", required=True)
    p.add_argument("--condition")
    p.add_argument("--ground-level", type=int, default=3)
    p.set_defaults(func=cmd_force)

    p = sub.add_parser("sites", parents=[common], help="evental sites of a JSON model")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_sites)

    p = sub.add_parser("report", parents=[common], help="run the claim registry")
    p.add_argument("--scale", choices=sorted(SCALES), default="small")
    p.add_argument("--timings", action="store_true", help="include runtimes (breaks byte-identity)")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("json", False), ("seed", 42), ("max_rank", None), ("max_depth", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return args.func(args)
    except (FormulaSyntaxError, ParseFailure) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"resource bound: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (HffError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
