"""Command-line interface: ``unicusp <command> ...``.

Exit codes: 0 when every check passes, 1 on a verification failure,
2 on malformed input or flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .chains import (
    ChainDomainError,
    adjoint,
    chain_from_inductance,
    discriminant,
    format_chain,
    inductance,
    parse_chain,
    star,
)
from .classification import bounded_search
from .contraction import IntersectionConfig, chain_config, emit_dot
from .cubic import CHECKS
from .orevkov import VARIANTS, OrevkovSpec, orevkov_resolution, verify_orevkov, with_e0
from .report import Report
from .resolution import ResolutionError, ResolutionGraph, assemble_graph, cusp_profile, parse_resolution

PASS, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


# -- subcommands: each returns (text, exit code) -------------------------------------------

CHAIN_OPS = ("adjoint", "discriminant", "inductance", "star", "from-inductance")


def cmd_chain(args) -> tuple[str, int]:
    try:
        if args.op == "from-inductance":
            if len(args.operands) != 1:
                raise UsageError("from-inductance takes one fraction p/q")
            value = Fraction(args.operands[0])
            result = chain_from_inductance(value)
            inputs = [str(value)]
            shown = format_chain(result)
        else:
            want = 2 if args.op == "star" else 1
            if len(args.operands) != want:
                raise UsageError(f"{args.op} takes {want} chain(s)")
            chains = [parse_chain(s) for s in args.operands]
            inputs = [format_chain(c) for c in chains]
            if args.op == "adjoint":
                result = adjoint(chains[0])
            elif args.op == "star":
                result = star(*chains)
            elif args.op == "discriminant":
                result = discriminant(chains[0])
            else:
                result = inductance(chains[0])
            shown = format_chain(result) if isinstance(result, tuple) else str(result)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc
    if args.emit == "json":
        return _dumps({"op": args.op, "input": inputs, "result": shown}), PASS
    if args.emit == "dot":
        if not isinstance(result, tuple):
            raise UsageError(f"{args.op} has no graph to draw")
        return emit_dot(chain_config(result)), PASS
    return shown + "\n", PASS


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_resolution(text: str) -> ResolutionGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from exc
    try:
        if isinstance(data, dict) and "components" in data:
            parses = parse_resolution(IntersectionConfig.from_dict(data))
            if len(parses) != 1:
                raise UsageError(f"graph has {len(parses)} readings as a cusp resolution")
            return parses[0][0]
        return ResolutionGraph.from_json(text)
    except (ResolutionError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_resolve(args) -> tuple[str, int]:
    res = _load_resolution(_read_input(args.input))
    if args.emit == "dot":
        return emit_dot(assemble_graph(res)), PASS
    rep = Report("cusp resolution")
    rep.values["A"] = [list(a) for a in res.A]
    rep.values["B"] = [list(b) for b in res.B]
    rep.values["c_prime_self"] = res.c_prime_self
    rep.values["o"] = list(res.o)
    try:
        prof = cusp_profile(res)
    except ResolutionError as exc:
        rep.add("planar-consistent", False, str(exc))
    else:
        rep.add("planar-consistent", True)
        rep.values.update(prof.to_dict())
        rep.add("genus defect 0", prof.genus_defect == 0, f"defect {prof.genus_defect}")
    code = PASS if rep.ok else FAIL
    return (_dumps(rep.to_dict()) if args.emit == "json" else rep.render()), code


def cmd_orevkov(args) -> tuple[str, int]:
    try:
        spec = OrevkovSpec(args.m, args.variant)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.emit == "dot":
        return emit_dot(with_e0(orevkov_resolution(spec)), spec.name), PASS
    rep = verify_orevkov(spec)
    code = PASS if rep.ok else FAIL
    return (_dumps(rep.to_dict()) if args.emit == "json" else rep.render()), code


def cmd_classify(args) -> tuple[str, int]:
    if args.workers < 1:
        raise UsageError("--workers must be positive")
    result = bounded_search(args.max_len, args.max_weight, args.max_k, workers=args.workers)
    code = PASS if result.ok else FAIL
    if args.emit == "json":
        data = result.to_dict()
        data["bounds"] = {"max_len": args.max_len, "max_weight": args.max_weight, "max_k": args.max_k}
        return _dumps(data), code
    rep = Report(f"bounded classification (len <= {args.max_len}, weight <= {args.max_weight}, k <= {args.max_k})")
    rep.values["tasks"] = result.tasks
    rep.values["survivors"] = ", ".join(str(n) for n in result.names) or "none"
    rep.values["expected"] = ", ".join(result.expected) or "none"
    rep.values["III1b candidates refuted"] = result.refutations
    rep.add("survivors are exactly the Orevkov data in bounds", sorted(map(str, result.names)) == sorted(result.expected))
    rep.add("no anomalous survivors", not result.anomalies, f"{len(result.anomalies)} anomalies")
    return rep.render(), code


def cmd_cubic(args) -> tuple[str, int]:
    names = sorted(CHECKS) if args.check == "all" else [args.check]
    reports = [CHECKS[n]() for n in names]
    code = PASS if all(r.ok for r in reports) else FAIL
    if args.emit == "json":
        return _dumps([r.to_dict() for r in reports]), code
    return "\n".join(r.render() for r in reports), code


# -- parser -----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unicusp", description="Cusp resolution graphs and Orevkov curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, emits):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--emit", choices=emits, default="report")
        p.add_argument("--out", help="write the output here instead of stdout")
        return p

    p = add("chain", "chain algebra on bracket chains such as [2,2,4]", ("report", "json", "dot"))
    p.add_argument("op", choices=CHAIN_OPS)
    p.add_argument("operands", nargs="+")
    p.set_defaults(func=cmd_chain)

    p = add("resolve", "profile a resolution graph given as JSON", ("report", "json", "dot"))
    p.add_argument("input", nargs="?", default="-", help="JSON file, or - for stdin")
    p.set_defaults(func=cmd_resolve)

    p = add("orevkov", "build and verify the Orevkov data", ("report", "json", "dot"))
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--variant", choices=VARIANTS, default=VARIANTS[0])
    p.set_defaults(func=cmd_orevkov)

    p = add("classify", "bounded classification search", ("report", "json"))
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--max-weight", type=int, default=9)
    p.add_argument("--max-k", type=int, default=3)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_classify)

    p = add("cubic", "exact checks on the nodal cubic", ("report", "json"))
    p.add_argument("--check", choices=sorted(CHECKS) + ["all"], default="all")
    p.set_defaults(func=cmd_cubic)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except (UsageError, ChainDomainError) as exc:
        print(f"unicusp {args.command}: error: {exc}", file=sys.stderr)
        return USAGE
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"unicusp: cannot write {args.out}: {exc}", file=sys.stderr)
            return USAGE
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
