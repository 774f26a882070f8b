"""chevcarpet command line: checks, decompositions and reports."""

from __future__ import annotations

import argparse
import json
import sys

from .carpets import (
    Carpet,
    carpet_from_pair,
    check_admissible,
    check_carpet,
    counterexample_suite,
    load_pair,
)
from .chevgroup import (
    GroupError,
    bn_verify,
    bruhat_decompose,
    carpet_membership,
    check_form,
    element,
    frobenius_roundtrip_check,
    mixed_carpet,
    parse_word,
    perfectness_certificates,
    recompose,
    sl2_enumerate,
    symbol_check,
    verify_relations,
)
from .chevgroup.finite import DEFAULT_CAP
from .kmodules import ModuleError, one_module
from .roots import RootError, build_system
from .scalars import GF, ScalarError, parse_field

SCHEMA = 1
INPUT_ERRORS = (ScalarError, ModuleError, GroupError, RootError, OSError, json.JSONDecodeError, KeyError)


class Outcome:
    """What a subcommand hands back: pass/fail, a JSON-ready report and text lines."""

    def __init__(self, ok: bool, report: dict, lines: list[str], seed: int | None = None):
        self.ok = ok
        self.report = report
        self.lines = lines
        self.seed = seed


def _word_text(arg: str) -> str:
    if arg.startswith("@"):
        with open(arg[1:]) as fh:
            return fh.read()
    return arg


def _pair(args):
    if not args.pair:
        raise ModuleError("--pair <path> is required")
    pair = load_pair(args.pair)
    if args.p is not None and args.p != pair.p:
        raise ModuleError(f"--p {args.p} does not match the pair (p = {pair.p})")
    return pair


def _status_lines(checks) -> list[str]:
    out = []
    for c in checks:
        w = f"  witness: {c.witness}" if c.witness else ""
        out.append(f"{c.status.upper():5} {c.condition}{w}")
    return out


# -- subcommands -----------------------------------------------------------------


def cmd_pair_check(args) -> Outcome:
    pair = _pair(args)
    checks = check_admissible(pair.long, pair.short, pair.tag)
    ok = all(c.ok for c in checks)
    return Outcome(ok, {"tag": pair.tag, "admissible": ok, "checks": [c.to_json() for c in checks]},
                   [f"pair of type {pair.tag}"] + _status_lines(checks))


def cmd_carpet_check(args) -> Outcome:
    pair = _pair(args)
    v = check_carpet(carpet_from_pair(pair), stop_at_first=False)
    lines = [f"carpet of type {pair.tag}: {v.checked} conditions"]
    lines += _status_lines([e for e in v.entries if not e.ok] or [])
    lines.append("all conditions hold" if v.ok else f"first failure: {v.failure.condition}")
    rep = {"tag": pair.tag, "ok": v.ok, "checked": v.checked,
           "failures": [e.to_json() for e in v.entries if not e.ok]}
    return Outcome(v.ok, rep, lines)


def cmd_counterexamples(args) -> Outcome:
    checks = counterexample_suite(args.n or 4)
    ok = all(c.ok for c in checks)
    return Outcome(ok, {"n": args.n or 4, "checks": [c.to_json() for c in checks]}, _status_lines(checks))


def _system_and_field(args):
    fam = (args.type or "C").upper()
    system = build_system(f"{fam}{args.rank or 2}")
    desc = parse_field(args.field or "F2(x1)")
    return system, desc


def cmd_bruhat(args) -> Outcome:
    if not args.word:
        raise GroupError("--word is required")
    system, desc = _system_and_field(args)
    w = parse_word(_word_text(args.word), system, desc)
    g = element(w)
    form = bruhat_decompose(g)
    exact = recompose(form, desc) == g and check_form(form)
    rep = {"type": system.tag, "field": str(desc), "word": w.render(), "form": form.to_json(),
           "recomposition_exact": exact}
    f = form.to_json()
    lines = [f"u: {f['u']}", f"h: {f['torus']}", f"w: {f['w'] or '1'}", f"v: {f['v']}",
             f"recomposition exact: {exact}"]
    return Outcome(exact, rep, lines)


def cmd_membership(args) -> Outcome:
    pair = _pair(args)
    carpet = carpet_from_pair(pair)
    if not args.word:
        raise GroupError("--word is required")
    if args.field and parse_field(args.field) != carpet.desc:
        raise ScalarError(f"--field {args.field} does not match the pair field {carpet.desc}")
    w = parse_word(_word_text(args.word), carpet.system, carpet.desc)
    v = carpet_membership(element(w), carpet)
    lines = [f"verdict: {v.kind}"]
    if v.certificate:
        lines.append(f"certificate: {v.certificate}")
    if v.witness:
        lines.append(f"witness: {v.witness}")
    # NotMember is the only verdict that refutes membership
    return Outcome(v.kind != "NotMember", v.to_json(), lines)


def cmd_morphism_roundtrip(args) -> Outcome:
    desc = parse_field(args.field or "F2(x1,x2)")
    ranks = [args.rank] if args.rank else [2, 3]
    trials = args.trials or 100
    reps = [frobenius_roundtrip_check(r, 20, trials, args.seed, desc) for r in ranks]
    ok = all(r.ok for r in reps)
    lines = [f"{r.tag}: {r.checked} words, {len(r.failures)} failures" for r in reps]
    return Outcome(ok, {"field": str(desc), "results": [r.to_json() for r in reps]}, lines, args.seed)


def cmd_relations_verify(args) -> Outcome:
    desc = parse_field(args.field or "F2(x1,x2)")
    fams = [args.type.upper()] if args.type else ["C", "B"]
    rank = args.rank or 3
    reps = [verify_relations(f"{f}{rank}", args.trials or 50, args.seed, desc) for f in fams]
    ok = all(r.ok for r in reps)
    lines = [f"{r.tag}: {r.checked} instances, {len(r.failures)} failures" for r in reps]
    return Outcome(ok, {"field": str(desc), "results": [r.to_json() for r in reps]}, lines, args.seed)


def cmd_symbols(args) -> Outcome:
    desc = parse_field(args.field or "F2(x1)")
    rep = symbol_check(f"C{args.rank or 2}", args.trials or 50, args.seed, desc)
    return Outcome(rep.ok, rep.to_json(), [f"{rep.checked} symbols, {len(rep.failures)} not the identity"],
                   args.seed)


def cmd_sl2_enumerate(args) -> Outcome:
    cases = [args.case] if args.case else ["dihedral-F4", "a5-F9"]
    cap = args.cap or 10_000
    reps = [sl2_enumerate(c, cap) for c in cases]
    lines = []
    for r in reps:
        extra = ", ".join(f"{k} = {v}" for k, v in r.details.items())
        lines.append(f"{r.case}: order {r.order} ({extra})")
    return Outcome(all(r.ok for r in reps), {"results": [r.to_json() for r in reps]}, lines)


def cmd_bn_verify(args) -> Outcome:
    instances = [args.instance] if args.instance else ["sp4-gf4-exhaustive", "mixed-rational-sampled"]
    reps = [bn_verify(i, args.trials or 500, args.seed, args.cap or DEFAULT_CAP) for i in instances]
    lines = []
    for r in reps:
        lines.append(f"{r.instance}: " + ", ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in r.results.items()))
        lines.append("  counts: " + ", ".join(f"{k} = {v}" for k, v in r.counts.items()))
    seeded = any(r.seed is not None for r in reps)
    return Outcome(all(r.ok for r in reps), {"results": [r.to_json() for r in reps]}, lines,
                   args.seed if seeded else None)


def cmd_perfectness(args) -> Outcome:
    if args.field:
        desc = parse_field(args.field)
        if desc.is_finite:
            system = build_system(f"C{args.rank or 2}")
            carpets = [Carpet(system, one_module(desc), one_module(desc))]
        else:
            carpets = [mixed_carpet(desc)]
    else:
        d = GF(2)
        carpets = [mixed_carpet(), Carpet(build_system("C2"), one_module(d), one_module(d))]
    reps = [perfectness_certificates(c, args.trials or 20, args.seed) for c in carpets]
    lines = []
    for r in reps:
        if r.applicable:
            lines.append(f"{r.instance}: {len(r.certificates)} certificates, {len(r.failures)} failures")
        else:
            lines.append(f"{r.instance}: inapplicable ({r.note}); |E| = {r.group_order}, "
                         f"|[E,E]| = {r.derived_order}")
    return Outcome(all(r.ok for r in reps), {"results": [r.to_json() for r in reps]}, lines, args.seed)


# -- parser -------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--field", help='e.g. "F2(x1,x2)" or "GF(4)"')
    p.add_argument("--rank", type=int)
    p.add_argument("--type", help="root system family (B or C)")
    p.add_argument("--p", type=int, help="characteristic expected by the pair")
    p.add_argument("--n", type=int, help="number of variables")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int)
    p.add_argument("--cap", type=int, help="enumeration cap")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--pair", help="admissible pair JSON file")
    p.add_argument("--word", help="word text, or @path to read it from a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chevcarpet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(subparsers, name, func, **extra):
        p = subparsers.add_parser(name)
        _common(p)
        for flag, kw in extra.items():
            p.add_argument(f"--{flag}", **kw)
        p.set_defaults(func=func)
        return p

    def group(name, action, func, **extra):
        g = sub.add_parser(name)
        gs = g.add_subparsers(dest="action", required=True)
        leaf(gs, action, func, **extra)

    group("pair", "check", cmd_pair_check)
    group("carpet", "check", cmd_carpet_check)
    leaf(sub, "counterexamples", cmd_counterexamples)
    leaf(sub, "bruhat", cmd_bruhat)
    leaf(sub, "membership", cmd_membership)
    group("morphism", "roundtrip", cmd_morphism_roundtrip)
    group("relations", "verify", cmd_relations_verify)
    leaf(sub, "symbols", cmd_symbols)
    group("sl2", "enumerate", cmd_sl2_enumerate, case={"choices": ["dihedral-F4", "a5-F9"]})
    group("bn", "verify", cmd_bn_verify,
          instance={"choices": ["sp4-gf4-exhaustive", "mixed-rational-sampled"]})
    leaf(sub, "perfectness", cmd_perfectness)
    return parser


def _command_name(args) -> str:
    return args.command + (f" {args.action}" if getattr(args, "action", None) else "")


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    name = _command_name(args)
    try:
        res = args.func(args)
    except INPUT_ERRORS as e:
        msg = str(e) or type(e).__name__
        if args.json:
            print(json.dumps({"schema": SCHEMA, "command": name, "error": msg}, sort_keys=True), file=out)
        else:
            print(f"error: {msg}", file=sys.stderr)
        return 2
    if args.json:
        doc = {"schema": SCHEMA, "command": name, "ok": res.ok, "report": res.report}
        if res.seed is not None:
            doc["seed"] = res.seed
        print(json.dumps(doc, sort_keys=True, indent=2), file=out)
    else:
        if res.seed is not None:
            print(f"seed: {res.seed}", file=out)
        for line in res.lines:
            print(line, file=out)
        print("PASS" if res.ok else "FAIL", file=out)
    return 0 if res.ok else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
