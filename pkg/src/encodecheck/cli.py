"""Command-line front end.

Exit codes: 0 when the reported verdict is true, 1 when it is false, 2 for
usage or input errors (no verdict is printed then).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import criteria
from .errors import EncodabilityError, UsageError
from .harness import FIXTURES, GenConfig, falsify, fixture_path
from .instance_format import parse_instance
from .relations import KINDS, MODES, greatest_relation, relation_properties
from .witness import LEMMAS, LemmaArgs, verify_lemma, verify_rhs_only

CHECKS = ("divergence-reflection", "success-sensitiveness", "barb-sensitiveness", "full-abstraction", "oc")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p, top):
    default = None if top else argparse.SUPPRESS
    p.add_argument("-i", "--instance", dest="instance", default=default, help="instance file")
    p.add_argument("--format", choices=("text", "machine"), default="text" if top else argparse.SUPPRESS)


def build_parser():
    parser = _Parser(prog="encodecheck", description="Check encodability criteria on finite reduction systems.")
    _common(parser, True)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def command(name, help):
        p = sub.add_parser(name, help=help)
        _common(p, False)
        return p

    p = command("check", "decide an encodability criterion")
    p.add_argument("criterion", choices=CHECKS)
    p.add_argument("--variant", choices=criteria.VARIANTS, default="standard")
    p.add_argument("--mode", choices=MODES, default="respect")
    p.add_argument("--strength", choices=criteria.STRENGTHS, default="reaches")
    p.add_argument("--rel-source", default="RS")
    p.add_argument("--rel-target", default="RT")

    p = command("relprops", "closure and simulation properties of a named relation")
    p.add_argument("name")

    p = command("greatest", "greatest relation of a kind")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--respect", action="append", default=[], metavar="PRED:MODE")
    p.add_argument("--over", choices=("source", "target", "combined"), default="combined")

    for name, help in (("witness", "verify a catalogue lemma with its canonical witness"),
                       ("verify-rhs", "evaluate a lemma's relation-side conditions on a given relation")):
        p = command(name, help)
        p.add_argument("lemma", choices=LEMMAS, metavar="LEMMA-ID")
        p.add_argument("--rel", default=None)
        p.add_argument("--rel-source", default="RS")
        p.add_argument("--rel-target", default="RT")
        p.add_argument("--variant", choices=criteria.VARIANTS, default=None)
        p.add_argument("--mode", choices=MODES, default=None)
        p.add_argument("--strength", choices=criteria.STRENGTHS, default="reaches")
        p.add_argument("--pred", default="divergent")
        p.add_argument("--kind", choices=KINDS, default="weak-bisim")
        p.add_argument("--respect", action="append", default=[], metavar="PRED:MODE")

    p = command("falsify", "search for counterexamples to the catalogue lemmas")
    p.add_argument("--lemma", default="all", choices=("all",) + LEMMAS)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--max-src", type=int, default=4)
    p.add_argument("--max-tgt", type=int, default=5)
    p.add_argument("--workers", type=int, default=1)

    p = command("fixture", "write a shipped figure instance to a file")
    p.add_argument("name", choices=FIXTURES)
    p.add_argument("--emit", required=True, metavar="PATH")
    return parser


def _load(args):
    if not args.instance:
        raise UsageError(f"{args.command} needs an instance file (-i FILE)")
    return parse_instance(args.instance)


def _relation(rels, name, required=True):
    if name in rels:
        return rels[name]
    if required:
        known = ", ".join(sorted(rels)) or "none"
        raise UsageError(f"no relation named {name!r} in the instance (available: {known})")
    return None


def _constraints(items):
    out = []
    for item in items:
        pred, sep, mode = item.rpartition(":")
        if not sep or mode not in MODES:
            raise UsageError(f"--respect expects PRED:MODE with MODE in {', '.join(MODES)}, got {item!r}")
        out.append((pred, mode))
    return tuple(out)


def _cmd_check(args):
    enc, rels = _load(args)
    c = args.criterion
    if c == "divergence-reflection":
        v = criteria.divergence_reflection(enc)
    elif c == "success-sensitiveness":
        v = criteria.success_sensitiveness(enc, args.strength)
    elif c == "barb-sensitiveness":
        v = criteria.barb_sensitiveness(enc, args.mode, args.strength)
    elif c == "full-abstraction":
        v = criteria.full_abstraction(enc, _relation(rels, args.rel_source), _relation(rels, args.rel_target))
    else:
        v = criteria.operational_correspondence(enc, _relation(rels, args.rel_target), args.variant)
    text = f"check {c}: {v}"
    return v.holds, {"counterexamples": [x.as_dict() for x in v.counterexamples]}, text


def _system_for(enc, over):
    return {"source": enc.source, "target": enc.target}.get(over, enc.combined)


def _cmd_relprops(args):
    enc, rels = _load(args)
    R = _relation(rels, args.name)
    report = relation_properties(R, _system_for(enc, R.over)).as_dict()
    lines = [f"relprops {args.name} ({R.over}, {len(R)} pairs)"]
    for key in ("reflexive", "symmetric", "transitive", "preorder", "equivalence"):
        lines.append(f"  {key}: {report[key]}")
    for kind, ok in report["simulations"].items():
        lines.append(f"  {kind}: {ok}")
    for pred, modes in report["respects"].items():
        lines.append(f"  {pred}: " + ", ".join(f"{m}={ok}" for m, ok in modes.items()))
    return True, {"report": report}, "\n".join(lines)


def _pairs_text(R):
    return " ".join(f"({x},{y})" for x, y in R) or "(empty)"


def _cmd_greatest(args):
    enc, _ = _load(args)
    cons = _constraints(args.respect)
    R = greatest_relation(args.kind, _system_for(enc, args.over), cons, over=args.over)
    text = f"greatest {args.kind} over {args.over}: {len(R)} pairs\n  {_pairs_text(R)}"
    return True, {"relation": [list(p) for p in R]}, text


def _lemma_args(args, rels):
    kw = {"RS": _relation(rels, args.rel_source, required=False),
          "RT": _relation(rels, args.rel_target, required=False),
          "pred": args.pred, "mode": args.mode, "strength": args.strength,
          "variant": args.variant, "kind": args.kind}
    cons = _constraints(args.respect)
    if args.lemma == "COMB-TWO-PRED" and cons:
        kw["preds"] = cons
    elif cons:
        kw["constraints"] = cons
    if args.rel is not None:
        kw["R"] = _relation(rels, args.rel)
    return LemmaArgs(**kw)


def _cmd_witness(args):
    enc, rels = _load(args)
    report = verify_lemma(args.lemma, enc, _lemma_args(args, rels))
    lines = [f"witness {args.lemma} ({report.form})"]
    for name, v in report.preconditions:
        lines.append(f"  precondition {name}: {'holds' if v.holds else 'fails'}")
    lines.append(f"  criterion side: {report.lhs}")
    for name, v in report.rhs:
        lines.append(f"  witness {name}: {v}")
    if report.relation is not None:
        lines.append(f"  witness relation: {_pairs_text(report.relation)}")
    lines.append(f"  bi-implication: {report.holds}")
    return report.holds, {"report": report.as_dict()}, "\n".join(lines)


def _cmd_verify_rhs(args):
    enc, rels = _load(args)
    if args.rel is None:
        raise UsageError("verify-rhs needs --rel NAME")
    largs = _lemma_args(args, rels)
    v = verify_rhs_only(args.lemma, enc, largs.R, largs)
    text = f"verify-rhs {args.lemma} on {args.rel}: {v}"
    return v.holds, {"counterexamples": [x.as_dict() for x in v.counterexamples]}, text


def _cmd_falsify(args):
    if args.iters < 0 or args.workers < 1:
        raise UsageError("--iters must be non-negative and --workers positive")
    try:
        config = GenConfig(seed=args.seed, max_src=args.max_src, max_tgt=args.max_tgt)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = falsify(args.lemma, config, args.iters, args.workers)
    return report.ok, {"report": report.as_dict()}, report.render()


def _cmd_fixture(args):
    text = fixture_path(args.name).read_text(encoding="utf-8")
    try:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {args.emit}: {exc.strerror}") from None
    return True, {"report": {"fixture": args.name, "path": args.emit}}, f"wrote {args.name} to {args.emit}"


_COMMANDS = {
    "check": _cmd_check,
    "relprops": _cmd_relprops,
    "greatest": _cmd_greatest,
    "witness": _cmd_witness,
    "verify-rhs": _cmd_verify_rhs,
    "falsify": _cmd_falsify,
    "fixture": _cmd_fixture,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError(f"missing command; expected one of {', '.join(_COMMANDS)}")
        verdict, payload, text = _COMMANDS[args.command](args)
    except EncodabilityError as exc:
        print(str(exc), file=err)
        return 2
    if args.format == "machine":
        doc = {"command": args.command, "verdict": verdict, **payload}
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")
    return 0 if verdict else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
