"""Command-line driver.

Exit codes: 0 success, 1 verdict UNKNOWN or an axiom failure, 2 usage or
input error, 3 internal error. Output bytes depend only on inputs and flags;
``--jobs`` changes wall time only.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__, blowup as bl, classify as cl, presentations as pr, projection as pj, random_model as rm
from .delta import four_point_delta
from .graph import GraphError, parse_graph

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


@dataclass
class CommandOutcome:
    code: int
    text: str
    payload: object = None


class UsageError(Exception):
    pass


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, default=_json_default) + "\n"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _graph(path: str):
    return parse_graph(_read(path))


# -- subcommands -------------------------------------------------------------------


def cmd_classify(args) -> CommandOutcome:
    report = cl.classify(_graph(args.graph))
    code = EXIT_OK if report.verdict.hopfian else EXIT_NEGATIVE
    return CommandOutcome(code, report.to_text(), report.to_dict())


def cmd_pr_graph(args) -> CommandOutcome:
    g = _graph(args.graph)
    try:
        prg = cl.product_region_graph(g)
    except cl.HypothesisError as exc:
        raise UsageError(str(exc)) from None
    return CommandOutcome(EXIT_OK, prg.to_dot(), prg.to_dict())


def cmd_blowup(args) -> CommandOutcome:
    X, W = bl.parse_blowup(_read(args.file))
    classes = bl.simplex_classes(X)
    chain = bl.longest_link_chain(X)
    admissible = bl.support_is_admissible(X.support)
    payload = X.to_dict()
    payload.update(
        {
            "wedges": [[bl.format_simplex(X, a), bl.format_simplex(X, b)] for a, b in W.edges()],
            "simplex_classes": len(classes),
            "longest_link_chain": chain,
            "support_admissible": admissible,
        }
    )
    lines = [
        f"support: {len(X.support.vertices)} vertices, {len(X.support.edge_list())} edges"
        + ("" if admissible else " (not triangle/square-free or has isolated vertices)"),
        f"blowup: {len(X.vertices)} vertices, {len(X.edges())} edges",
        "maximal simplices: " + " ".join(payload["maximal_simplices"]),
        f"simplex classes: {len(classes)}",
        f"longest link chain: {chain}",
    ]
    if args.export:
        text = bl.format_blowup(X, W)
        return CommandOutcome(EXIT_OK, text, payload)
    return CommandOutcome(EXIT_OK, "\n".join(lines) + "\n", payload)


def cmd_chhs_check(args) -> CommandOutcome:
    X, W = bl.parse_blowup(_read(args.file))
    if args.complete_w:
        W = bl.XGraph.complete(X)
    report = bl.chhs_check(X, W, Fraction(args.delta), args.complexity)
    return CommandOutcome(EXIT_OK if report.passed else EXIT_NEGATIVE, report.to_text(), report.to_dict())


def _projection_data(path: str, want_crf: bool):
    try:
        data = pj.parse_cps(_read(path))
    except pj.MalformedData as exc:
        raise UsageError(str(exc)) from None
    if want_crf and not isinstance(data, pj.RotatingFamilyData):
        raise UsageError("crf-check needs perm/gamma/thetarot lines")
    return data


def cmd_cps_check(args) -> CommandOutcome:
    data = _projection_data(args.file, False)
    cps = data.cps if isinstance(data, pj.RotatingFamilyData) else data
    report = pj.cps_check(cps)
    return CommandOutcome(EXIT_OK if report.passed else EXIT_NEGATIVE, report.to_text(), report.to_dict())


def cmd_crf_check(args) -> CommandOutcome:
    report = pj.crf_check(_projection_data(args.file, True))
    return CommandOutcome(EXIT_OK if report.passed else EXIT_NEGATIVE, report.to_text(), report.to_dict())


def cmd_present(args) -> CommandOutcome:
    g = _graph(args.graph)
    if args.kernel is not None:
        spec = pr.parse_kernel_spec(_read(args.kernel))
        p = pr.kernel_presentation(g, spec)
    elif args.mode == "artin":
        p = pr.artin_presentation(g)
    else:
        if args.N is None:
            raise UsageError(f"--{args.mode} requires --N")
        if args.N < 1:
            raise UsageError("--N must be >= 1")
        build = pr.shephard_presentation if args.mode == "shephard" else pr.hyperbolic_quotient_presentation
        p = build(g, args.N)
    payload = p.to_dict()
    text = pr.format_presentation(p)
    if args.abelianize:
        ab = pr.abelianization(p)
        payload["abelianization"] = ab.to_dict()
        text += f"# abelianization: {ab}\n"
    return CommandOutcome(EXIT_OK, text, payload)


def cmd_random(args) -> CommandOutcome:
    try:
        cfg = rm.parse_sweep(_read(args.config), seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    reports = rm.run_sweep(cfg, jobs=args.jobs)
    payload = {"f": cfg.f_expr, "trials": cfg.trials, "seed": cfg.seed, "rows": [r.to_dict() for r in reports]}
    return CommandOutcome(EXIT_OK, rm.sweep_csv(reports), payload)


def cmd_delta(args) -> CommandOutcome:
    text = _read(args.file)
    if args.blowup:
        X, W = bl.parse_blowup(text)
        target = bl.augmented_graph(X, W) if args.augmented else X.adjacency()
    else:
        target = parse_graph(text)
    delta = four_point_delta(target, jobs=args.jobs)
    return CommandOutcome(EXIT_OK, f"delta = {delta}\n", {"delta": str(delta), "float": float(delta)})


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommand copies use SUPPRESS so they never overwrite flags given before the subcommand
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--json", action="store_true", default=d(False), help="emit the JSON-shaped report")
        p.add_argument("--out", metavar="PATH", default=d(None), help="also write the output to PATH")
        p.add_argument("--seed", type=int, default=d(None), help="Monte Carlo seed (overrides config)")
        p.add_argument("--jobs", type=int, default=d(1), help="worker processes (never changes output)")
        return p

    common = flags(True)
    parser = argparse.ArgumentParser(prog="artinkit", description=__doc__.splitlines()[0], parents=[flags(False)])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.set_defaults(func=func)
        return p

    add("classify", cmd_classify, "type flags, odd decomposition and Hopf verdict").add_argument("graph")
    add("pr-graph", cmd_pr_graph, "product region graph as DOT").add_argument("graph")
    p = add("blowup", cmd_blowup, "summarize a blowup file")
    p.add_argument("file")
    p.add_argument("--export", action="store_true", help="print the canonical blowup file instead")
    p = add("chhs-check", cmd_chhs_check, "check the combinatorial HHS axioms")
    p.add_argument("file")
    p.add_argument("--delta", default="1", help="hyperbolicity constant for augmented links (rational)")
    p.add_argument("--complexity", type=int, default=25, help="bound on strict link chains")
    p.add_argument("--complete-w", action="store_true", help="ignore wedge lines and use the complete X-graph")
    add("cps-check", cmd_cps_check, "check composite projection system axioms").add_argument("file")
    add("crf-check", cmd_crf_check, "check composite rotating family axioms").add_argument("file")
    p = add("present", cmd_present, "emit a group presentation")
    p.add_argument("graph")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--artin", dest="mode", action="store_const", const="artin")
    mode.add_argument("--shephard", dest="mode", action="store_const", const="shephard")
    mode.add_argument("--hyperbolic-quotient", dest="mode", action="store_const", const="hyperbolic-quotient")
    mode.add_argument("--kernel", metavar="SPECFILE")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--abelianize", action="store_true", help="append the abelianization")
    p.set_defaults(mode="artin")
    add("random", cmd_random, "Monte Carlo sweep over the random model").add_argument("config")
    p = add("delta", cmd_delta, "four-point hyperbolicity constant")
    p.add_argument("file")
    p.add_argument("--blowup", action="store_true", help="read a blowup file and use the blowup graph")
    p.add_argument("--augmented", action="store_true", help="with --blowup, use the augmented graph")
    return parser


def run(argv=None) -> CommandOutcome:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
        return CommandOutcome(code, "")
    if args.jobs < 1:
        return CommandOutcome(EXIT_USAGE, "", {"error": "--jobs must be >= 1"})
    try:
        outcome = args.func(args)
    except (UsageError, GraphError, pr.PresentationError, bl.BlowupError, pj.MalformedData, ValueError) as exc:
        return CommandOutcome(EXIT_USAGE, "", {"error": str(exc)})
    except Exception:  # pragma: no cover - surfaced as exit 3
        return CommandOutcome(EXIT_INTERNAL, "", {"error": traceback.format_exc()})
    if args.json:
        outcome.text = dumps(outcome.payload)
    if args.out:
        Path(args.out).write_text(outcome.text, encoding="utf-8")
    return outcome


def main(argv=None) -> int:
    outcome = run(argv)
    if outcome.code in (EXIT_USAGE, EXIT_INTERNAL) and isinstance(outcome.payload, dict):
        print(f"artinkit: error: {outcome.payload['error']}", file=sys.stderr)
    sys.stdout.write(outcome.text)
    return outcome.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
