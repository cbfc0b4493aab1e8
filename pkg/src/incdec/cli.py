"""Command-line front end (``incdec``).

Exit status: 0 on success, 1 when a verification check fails, 2 on usage or
input errors (including capacity limits).
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import reproduce
from .algorithms import (
    TieBreak,
    best_ordering,
    check_ordering,
    double_greedy,
    greedy_order,
    opt_profile,
    ordering_names,
    randomized_pair,
)
from .analyzers import DEFAULT_CAP, analyze
from .errors import InputError, PreconditionError
from .harness import competitive_ratio, expected_competitive_ratio
from .instances import CATALOG, Instance, build_named_instance, random_instance
from .io import dumps, emit_report, instance_to_json, parse_instance
from .rational import fmt

RANDOM_IDS = {"random_coverage": "coverage", "random_table": "table", "random_modular": "modular"}


def _add_io(p, fmt_choice=False):
    p.add_argument("-i", "--input", required=True, help="instance JSON file")
    p.add_argument("-o", "--output", default="-", help="report path (default: stdout)")
    if fmt_choice:
        p.add_argument("--format", choices=("json", "csv"), default="json")


def _add_run_flags(p):
    p.add_argument("--prec", choices=("lt", "le"), default="lt", help="tie rule between prefix and suffix")
    p.add_argument("--tie", default="min-index", help='"min-index", "max-index" or "priority:e3,e1,..."')
    p.add_argument("--opt-cap", type=int, default=20, help="largest n for the OPT_k enumeration")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="incdec", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("analyze", help="structural properties of g and h (or f)")
    _add_io(p)
    p.add_argument("--cap", type=int, default=None, help=f"analyzer n-cap (default {DEFAULT_CAP})")

    p = sub.add_parser("run", help="run an algorithm and report its competitive ratio")
    _add_io(p, fmt_choice=True)
    _add_run_flags(p)
    p.add_argument("--algo", choices=("double-greedy", "randomized", "greedy"), default="double-greedy")

    p = sub.add_parser("ratio", help="competitive ratio of a given ordering")
    _add_io(p, fmt_choice=True)
    p.add_argument("--order", required=True, help="comma-separated element labels")
    p.add_argument("--opt-cap", type=int, default=20)

    p = sub.add_parser("best-order", help="exact best ordering and its ratio")
    _add_io(p, fmt_choice=True)
    p.add_argument("--order-cap", type=int, default=16)

    p = sub.add_parser("gen", help="write a named or random instance file")
    p.add_argument("--id", required=True, choices=sorted(CATALOG) + sorted(RANDOM_IDS))
    p.add_argument("-o", "--output", default="-")
    for name in ("n", "k"):
        p.add_argument(f"--{name}", type=int)
    for name in ("c", "gamma", "eps"):
        p.add_argument(f"--{name}", help="rational, e.g. 1/2")
    p.add_argument("--seed", type=int, default=0, help="random generators only")

    p = sub.add_parser("verify-paper", help="run the full reproduction suite")
    p.add_argument("--only", action="append", choices=list(reproduce.CRITERIA), help="run only this criterion")
    p.add_argument("-o", "--output", default=None, help="also write a JSON summary here")
    return parser


def _load(args) -> Instance:
    return parse_instance(args.input)


def cmd_analyze(args) -> int:
    inst = _load(args)
    ground = inst.ground
    if inst.mode == "combined":
        g, h = inst.oracles()
        body = {"g": analyze(g, cap=args.cap).to_json(ground), "h": analyze(h, cap=args.cap).to_json(ground)}
    else:
        body = {"f": analyze(inst.single(), cap=args.cap).to_json(ground)}
    emit_report(body, "json", args.output)
    return 0


def cmd_run(args) -> int:
    inst = _load(args)
    ground = inst.ground
    f = inst.objective()
    opt = opt_profile(f, cap=args.opt_cap)
    tie = TieBreak.parse(args.tie, ground)
    body = {"algorithm": args.algo, "tie": tie.describe(ground)}
    if inst.mode == "incremental" or args.algo == "greedy":
        oracle = inst.single() if inst.mode == "incremental" else inst.oracles()[1]
        order = greedy_order(oracle, tie)
        body["algorithm"] = "greedy"
        report = competitive_ratio(f, order, opt)
        body["ordering"] = ordering_names(order, ground)
    elif args.algo == "randomized":
        g, h = inst.oracles()
        pair = randomized_pair(g, h, tie)
        report = expected_competitive_ratio(f, pair, opt)
        body["orderings"] = [ordering_names(o, ground) for o in pair.outcomes()]
    else:
        g, h = inst.oracles()
        order, trace = double_greedy(g, h, args.prec, tie, auto_normalize=True)
        report = competitive_ratio(f, order, opt)
        body.update(prec=args.prec, ordering=ordering_names(order, ground), trace=trace.to_json(ground))
    if args.format == "csv":
        emit_report(report, "csv", args.output, ground)
    else:
        body["report"] = report.to_json(ground)
        emit_report(body, "json", args.output)
    return 0


def cmd_ratio(args) -> int:
    inst = _load(args)
    ground = inst.ground
    f = inst.objective()
    order = check_ordering([ground.index(x.strip()) for x in args.order.split(",") if x.strip()], ground.n)
    report = competitive_ratio(f, order, opt_profile(f, cap=args.opt_cap))
    if args.format == "csv":
        emit_report(report, "csv", args.output, ground)
    else:
        emit_report({"ordering": ordering_names(order, ground), "report": report.to_json(ground)}, "json", args.output)
    return 0


def cmd_best_order(args) -> int:
    inst = _load(args)
    ground = inst.ground
    f = inst.objective()
    opt = opt_profile(f)
    order, best = best_ordering(f, opt, cap=args.order_cap)
    report = competitive_ratio(f, order, opt)
    if args.format == "csv":
        emit_report(report, "csv", args.output, ground)
    else:
        body = {"ordering": ordering_names(order, ground), "rho": fmt(best), "report": report.to_json(ground)}
        emit_report(body, "json", args.output)
    return 0


def cmd_gen(args) -> int:
    if args.id in RANDOM_IDS:
        if args.n is None:
            raise InputError(f"{args.id} needs --n")
        kind = RANDOM_IDS[args.id]
        inst = random_instance(kind, kind, args.n, args.seed)
    else:
        params = {}
        for name in CATALOG[args.id]:
            v = getattr(args, name)
            if v is None:
                raise InputError(f"{args.id} needs --{name}")
            params[name] = v
        inst = build_named_instance(args.id, params)
    emit_report(instance_to_json(inst), "json", args.output)
    return 0


def cmd_verify_paper(args) -> int:
    results = reproduce.run_all(args.only)
    width = max(len(c.name) for c in results)
    for c in results:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  {c.elapsed:7.2f}s  {c.title}")
        if not c.passed or args.verbose:
            for line in c.lines:
                print(f"      {line}")
    failed = [c.name for c in results if not c.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    if args.output:
        summary = {c.name: {"passed": c.passed, "lines": c.lines} for c in results}
        with open(args.output, "w") as fh:
            fh.write(dumps(summary))
    return 1 if failed else 0


COMMANDS = {
    "analyze": cmd_analyze,
    "run": cmd_run,
    "ratio": cmd_ratio,
    "best-order": cmd_best_order,
    "gen": cmd_gen,
    "verify-paper": cmd_verify_paper,
}


def execute(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.verb](args)
    except (InputError, PreconditionError) as exc:
        print(f"incdec {args.verb}: error: {exc}", file=sys.stderr)
        return 2


def main(argv: list[str] | None = None) -> None:
    sys.exit(execute(argv))


if __name__ == "__main__":
    main()
