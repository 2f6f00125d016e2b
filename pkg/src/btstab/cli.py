"""Command-line front end: ``btstab <subcommand> [flags]``.

Exit status: 0 success, 1 a verification found a mismatch, 2 usage error.
Set BTSTAB_LOG (e.g. INFO, DEBUG) for progress messages on stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import suites
from .errors import BtStabError
from .grp import DEFAULT_CLOSURE_BUDGET, DEFAULT_ENUM_BUDGET
from .quadext import (ExtCtx, classify_extensions, different_valuation, make_extension, parse_extension)
from .ring import parse_base, parse_element
from .stab import (MODES, PARSES, base_point, brute_force_stabilizer, compare_sets, theorem_level,
                   theorem_params, transported_closed_form, _literal)
from .tree import export_dot, export_json, normalize_point, quadratic_point_from_vertex

log = logging.getLogger("btstab")

# base-field working precision; large enough for every desk-scale run
WORK_PRECISION = 16


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", default="q2", help="q2 | q2sqrt2 | eisenstein:c0,c1,... (default q2)")
    common.add_argument("--ext", default=None, help="unram | eis:<a>,<b>; default: every extension")
    common.add_argument("--depth", type=int, default=None)
    common.add_argument("--level", type=int, default=None)
    common.add_argument("--max-level", type=int, default=None)
    common.add_argument("--precision", type=int, default=None, help="N, or the working level for lf/casselman")
    common.add_argument("--method", choices=("brute", "closed", "both"), default="both")
    common.add_argument("--format", choices=("json", "dot", "text"), default=None)
    common.add_argument("--suite", choices=suites.SUITES, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--budget-closure", type=int, default=DEFAULT_CLOSURE_BUDGET)
    common.add_argument("--budget-enum", type=int, default=DEFAULT_ENUM_BUDGET)
    common.add_argument("--mode", choices=MODES, default="orbit",
                        help="orbit: g maps the point into its Galois orbit; vertex: g fixes the vertex")
    common.add_argument("--parse", choices=PARSES, default="union_first", help="reading of the s-factor ranges")
    common.add_argument("--point", default=None, help="x:y:n in tree label syntax, e.g. 1:0+1*x:2")
    common.add_argument("--config", default=None, help="key=value file; its entries override flags")

    p = argparse.ArgumentParser(prog="btstab", description="Stabilizers of quadratic points on Bruhat-Tits trees.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("extensions", parents=[common], help="list the quadratic extensions of the base")
    sub.add_parser("tree", parents=[common], help="export the tree of E to a given depth")
    sub.add_parser("stabilizer", parents=[common], help="stabilizer of one quadratic point")
    sub.add_parser("verify", parents=[common], help="run a verification suite")
    sub.add_parser("selftest", parents=[common], help="randomized ring and extension identities")
    return p


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    with open(args.config) as fh:
        lines = fh.read().splitlines()
    typed = {a.dest: a for sp in parser._subparsers._group_actions for a in
             sp.choices[args.command]._actions}
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        dest = key.strip().lstrip("-").replace("-", "_")
        if not sep or dest not in typed or dest in ("config", "help"):
            raise UsageError(f"bad config line {raw!r}")
        action = typed[dest]
        value = value.strip()
        if action.type is not None:
            value = action.type(value)
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"config {dest}={value!r} not in {sorted(action.choices)}")
        setattr(args, dest, value)


def _validate(args) -> None:
    for name in ("budget_closure", "budget_enum", "jobs"):
        if getattr(args, name) < 1:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    for name in ("depth", "level", "max_level", "precision"):
        v = getattr(args, name)
        if v is not None and v < 0:
            raise UsageError(f"--{name.replace('_', '-')} must be non-negative")
    if args.precision is not None and args.max_level is not None and args.command == "verify" \
            and args.suite in ("theorem", "lemma-j") and args.precision < args.max_level + 1:
        raise UsageError("precision must be at least max-level + 1")


def _base(args):
    return parse_base(args.base, WORK_PRECISION)


def _extensions(args, F) -> list[ExtCtx]:
    descs = [parse_extension(F, args.ext)] if args.ext else classify_extensions(F)
    return [make_extension(F, d) for d in descs]


def _one_extension(args, F) -> ExtCtx:
    if not args.ext:
        raise UsageError("--ext is required for this subcommand")
    return make_extension(F, parse_extension(F, args.ext))


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


# -- subcommands ---------------------------------------------------------------


def cmd_extensions(args) -> int:
    F = _base(args)
    out = []
    for d in classify_extensions(F):
        ext = make_extension(F, d)
        out.append({**d.to_json(), "diff_recomputed": different_valuation(ext), "e_EF": ext.e_EF,
                    "f_EF": 2 // ext.e_EF})
    _emit(out)
    return 0


def cmd_tree(args) -> int:
    F = _base(args)
    ext = _one_extension(args, F)
    depth = 3 if args.depth is None else args.depth
    if depth > ext.precision:
        raise UsageError(f"depth {depth} exceeds the working precision {ext.precision}")
    if (args.format or "dot") == "dot":
        sys.stdout.write(export_dot(ext, depth))
    else:
        _emit({"base": args.base, "ext": ext.desc.spec(), **export_json(ext, depth)})
    return 0


def _parse_coord(ext: ExtCtx, text: str):
    """Inverse of the tree label syntax: ``c0``, ``c0+c1*x``, ``(c0)+(c1)*x``."""
    text = text.strip()
    if not text.endswith("*x"):
        return ext.embed(parse_element(ext.base, text.strip("()")))
    body = text[:-2]
    if body.endswith(")"):
        cut = body.rindex("(")
        c1 = body[cut + 1:-1]
        c0 = body[:cut].rstrip("+")
    else:
        c0, _, c1 = body.rpartition("+")
    c0 = c0.strip("()") or "0"
    return ext(parse_element(ext.base, c0), parse_element(ext.base, c1))


def _point(args, ext: ExtCtx):
    if args.point:
        x, y, n = args.point.rsplit(":", 2)
        depth = int(n)
        X = ext if ext.precision >= depth else ext.with_precision(depth)
        return quadratic_point_from_vertex(normalize_point(_parse_coord(X, x), _parse_coord(X, y), depth))
    if args.level is None:
        raise UsageError("give --level (base point) or --point")
    if args.level < 1:
        raise UsageError("--level must be at least 1")
    return base_point(ext, args.level)


def cmd_stabilizer(args) -> int:
    F = _base(args)
    ext = _one_extension(args, F)
    point = _point(args, ext)
    n = theorem_level(point)
    N = args.precision if args.precision is not None else n + 2
    oracle = closed = None
    if args.method in ("brute", "both"):
        oracle = brute_force_stabilizer(point, N, args.mode, args.jobs, args.budget_enum)
    if args.method in ("closed", "both"):
        closed = transported_closed_form(point, N, args.parse, args.budget_enum)
    verdict, wit = (None, [])
    if oracle is not None and closed is not None:
        verdict, wit = compare_sets(oracle, closed)
    FN = ext.base.with_precision(N)
    report = {
        "ext": ext.desc.spec(),
        "point": point.rep.label(),
        "n": n,
        "tree_level": point.level,
        "N": N,
        "params": theorem_params(ext, n).to_json(),
        "parse_choice": args.parse,
        "mode": args.mode,
        "oracle_size": None if oracle is None else len(oracle),
        "closed_size": None if closed is None else len(closed),
        "verdict": verdict,
        "witnesses": [_literal(FN, k) for k in wit],
    }
    if args.format == "text":
        sys.stdout.write(" ".join(f"{k}={report[k]}" for k in ("ext", "point", "N", "oracle_size",
                                                               "closed_size", "verdict")) + "\n")
    else:
        _emit(report)
    return 1 if verdict not in (None, "equal") else 0


def cmd_verify(args) -> int:
    if not args.suite:
        raise UsageError("--suite is required")
    F = _base(args)
    exts = _extensions(args, F)
    kw = {"precision": args.precision, "parse": args.parse, "mode": args.mode, "jobs": args.jobs,
          "seed": args.seed, "budget_enum": args.budget_enum, "budget_closure": args.budget_closure,
          "depth": args.depth, "base": F}
    if args.max_level is not None:
        kw["max_level"] = args.max_level
    if args.suite in ("lf", "casselman"):
        kw["working_level"] = kw.pop("precision")
    results, passed = suites.run_suite(args.suite, exts, **kw)
    _report(args, {"suite": args.suite, "base": args.base, "passed": passed, "results": results})
    return 0 if passed else 1


def cmd_selftest(args) -> int:
    F = parse_base(args.base, args.precision or 6)
    results, passed = suites.selftest(F, args.seed)
    _report(args, {"suite": "selftest", "base": args.base, "passed": passed, "results": results})
    return 0 if passed else 1


def _report(args, obj) -> None:
    if args.format == "text":
        for r in obj["results"]:
            ok = r.get("holds", r.get("equal", r.get("verdict") == "equal"))
            tag = r.get("check") or r.get("name") or r.get("identity") or r.get("target")
            sys.stdout.write(f"{'PASS' if ok else 'FAIL'} {obj['suite']} {r.get('ext', obj['base'])} {tag}"
                             f" {r.get('point', '')} n={r.get('n', '-')}\n")
        sys.stdout.write(f"{'PASS' if obj['passed'] else 'FAIL'} {obj['suite']} overall\n")
    else:
        _emit(obj)


COMMANDS = {"extensions": cmd_extensions, "tree": cmd_tree, "stabilizer": cmd_stabilizer,
            "verify": cmd_verify, "selftest": cmd_selftest}


def _setup_logging() -> None:
    level = os.environ.get("BTSTAB_LOG", "WARNING").upper()
    if level.isdigit():
        level = int(level)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    try:
        _setup_logging()
        if args.config:
            _apply_config(args, parser)
        _validate(args)
        return COMMANDS[args.command](args)
    except (UsageError, BtStabError, ValueError, OSError) as exc:
        sys.stderr.write(f"btstab: error: {exc}\n")
        return 2


dispatch = main

if __name__ == "__main__":
    sys.exit(main())
