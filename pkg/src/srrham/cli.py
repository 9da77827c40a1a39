"""Command-line surface.

Subcommands: gen, import, recovery, stats, check, max, lambda-star, delta,
subset, waterfill, m3, verify, slice.  Output is canonical JSON (CSV for
slice) on stdout or --out; identical invocations produce byte-identical
output.  Rationals are serialized as exact "p/q" strings, never floats.

Exit codes: 0 for a completed computation (including "not a member" answers,
which are data), 2 for input or validation problems, 3 when a resource
ceiling (LP pivots, waterfilling events) aborts the run.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import codes, hypergraph as hg, lp, recovery, srr
from .fields import format_rational, parse_rational


def _load_code(path: str) -> codes.LinearCode:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if "generator" not in data or "q" not in data:
        raise ValueError(f"{path}: expected a code file with 'generator' and 'q'")
    return codes.code_from_json_dict(data)


def _symbol_token(token: str, k: int) -> int:
    """A data symbol given as a 1-based index or a letter (a=1, b=2, ...)."""
    tok = token.strip()
    if tok.isalpha() and len(tok) == 1:
        idx = ord(tok.lower()) - ord("a") + 1
    else:
        try:
            idx = int(tok)
        except ValueError as exc:
            raise ValueError(f"bad symbol token {token!r}") from exc
    if not 1 <= idx <= k:
        raise ValueError(f"symbol {token!r} out of range 1..{k}")
    return idx


def _symbols_arg(text: str, k: int) -> list[int]:
    return [_symbol_token(t, k) for t in text.split(",")]


def _instance(args, code: codes.LinearCode) -> srr.SrrInstance:
    capacity = parse_rational(getattr(args, "capacity", "1") or "1")
    if capacity <= 0:
        raise ValueError("capacity must be positive")
    cap = getattr(args, "cap", None)
    return srr.SrrInstance.for_code(code, capacity, cap)


def _cmd_gen(args) -> dict:
    if args.q < 2:
        raise ValueError("q must be a prime >= 2")
    code = (
        codes.systematic_hamming(args.r, args.q)
        if args.systematic
        else codes.classic_hamming(args.r, args.q)
    )
    return code.to_json_dict()


def _cmd_import(args) -> dict:
    with open(args.file, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if "generator" not in data or "q" not in data:
        raise ValueError(f"{args.file}: expected 'generator' and 'q'")
    code = codes.import_generator(data["generator"], int(data["q"]))
    return code.to_json_dict()


def _cmd_recovery(args) -> dict:
    code = _load_code(args.code)
    system = recovery.build_recovery_system(code, args.cap)
    return system.to_json_dict()


def _cmd_stats(args) -> dict:
    code = _load_code(args.code)
    system = recovery.build_recovery_system(code, args.cap)
    graph = hg.from_recovery_system(system)
    if args.symbols:
        graph = hg.partial_hypergraph(graph, _symbols_arg(args.symbols, code.k))
    return hg.compute_stats(graph, args.pivot_limit).to_json_dict()


def _cmd_check(args) -> dict:
    code = _load_code(args.code)
    instance = _instance(args, code)
    demand = srr.parse_demand(args.demand, code.k)
    member, allocation = srr.membership(instance, demand, args.pivot_limit)
    out = {"member": member}
    out["allocation"] = allocation.to_json_list() if member else None
    return out


def _cmd_max(args) -> dict:
    code = _load_code(args.code)
    instance = _instance(args, code)
    weights = [parse_rational(t) for t in args.weights.split(",")]
    if len(weights) != code.k:
        raise ValueError(f"expected {code.k} weights, got {len(weights)}")
    value, demand, allocation = srr.max_objective(instance, weights, args.pivot_limit)
    return {
        "value": format_rational(value),
        "demand": [format_rational(x) for x in demand],
        "allocation": allocation.to_json_list(),
    }


def _cmd_lambda_star(args) -> dict:
    code = _load_code(args.code)
    instance = _instance(args, code)
    if args.symbol:
        i = _symbol_token(args.symbol, code.k)
        value = srr.lambda_star(instance, i, args.pivot_limit)
        return {"symbol": i, "value": format_rational(value)}
    stars = srr.lambda_star_vector(instance, args.pivot_limit)
    return {"values": [format_rational(x) for x in stars]}


def _cmd_delta(args) -> dict:
    code = _load_code(args.code)
    instance = _instance(args, code)
    return {"delta": format_rational(srr.delta_simplex(instance, args.pivot_limit))}


def _cmd_subset(args) -> dict:
    code = _load_code(args.code)
    instance = _instance(args, code)
    subset = _symbols_arg(args.symbols, code.k)
    return srr.subset_bound(instance, subset, args.pivot_limit).to_json_dict()


def _cmd_waterfill(args) -> dict:
    code = _load_code(args.code)
    instance = _instance(args, code)
    demand = srr.parse_demand(args.demand, code.k)
    allocation, served, residual = srr.waterfill(
        instance, demand, args.max_events
    )
    return {
        "allocation": allocation.to_json_list(),
        "served": [format_rational(x) for x in served],
        "residual": [format_rational(x) for x in residual],
    }


def _cmd_m3(args) -> dict:
    closed = srr.m3_closed_form(args.r)
    brute = srr.m3_brute(args.r)
    return {"r": args.r, "closed_form": closed, "brute": brute, "match": closed == brute}


def _cmd_verify(args) -> dict:
    if args.code:
        code = _load_code(args.code)
    else:
        if args.r is None or args.q is None:
            raise ValueError("verify needs either --code FILE or -r and -q")
        code = (
            codes.systematic_hamming(args.r, args.q)
            if args.systematic
            else codes.classic_hamming(args.r, args.q)
        )
    report = srr.verify_report(
        code,
        seed=args.seed,
        subset_samples=args.samples,
        uniform_samples=args.samples,
        pivot_limit=args.pivot_limit,
    )
    return report.to_json_dict()


def _cmd_slice(args) -> str:
    code = _load_code(args.code)
    instance = _instance(args, code)
    k = code.k
    axes = _symbols_arg(args.axes, k)
    if len(set(axes)) != len(axes):
        raise ValueError("axes must be distinct")
    fixed: dict[int, Fraction] = {}
    if args.fix:
        for part in args.fix.split(","):
            if "=" not in part:
                raise ValueError(f"bad --fix assignment {part!r}")
            sym, val = part.split("=", 1)
            fixed[_symbol_token(sym, k)] = parse_rational(val)
    overlap = set(axes) & set(fixed)
    if overlap:
        raise ValueError(f"symbols {sorted(overlap)} both axis and fixed")
    maximum = parse_rational(args.max)
    step = parse_rational(args.step)
    if step <= 0 or maximum < 0:
        raise ValueError("--step must be positive and --max nonnegative")
    ticks = []
    v = Fraction(0)
    while v <= maximum:
        ticks.append(v)
        v += step
    lines = [",".join([f"lambda_{i}" for i in range(1, k + 1)] + ["member"])]

    def fill(depth: int, demand: list[Fraction]) -> None:
        if depth == len(axes):
            member, _ = srr.membership(instance, tuple(demand), args.pivot_limit)
            row = [format_rational(x) for x in demand] + ["1" if member else "0"]
            lines.append(",".join(row))
            return
        for t in ticks:
            demand[axes[depth] - 1] = t
            fill(depth + 1, demand)
        demand[axes[depth] - 1] = Fraction(0)

    base = [fixed.get(i, Fraction(0)) for i in range(1, k + 1)]
    fill(0, base)
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srrham",
        description=(
            "Construct q-ary Hamming storage codes, enumerate their recovery "
            "systems, and query the exact service rate region."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, code_arg=True):
        if code_arg:
            p.add_argument("code", help="code JSON file (from gen or import)")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument(
            "--pivot-limit",
            type=int,
            default=None,
            help="LP pivot ceiling (also via SRRHAM_PIVOT_LIMIT)",
        )

    p = sub.add_parser("gen", help="construct a Hamming code")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-q", type=int, required=True)
    p.add_argument(
        "--systematic",
        action="store_true",
        help="standard form [I_k | P] (default: counting-ordered layout)",
    )
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("import", help="validate an external generator matrix")
    p.add_argument("file", help="JSON file with 'generator' and 'q'")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_import)

    p = sub.add_parser("recovery", help="enumerate the minimum recovery system")
    add_common(p)
    p.add_argument("--cap", type=int, default=None, help="search size cap")
    p.set_defaults(func=_cmd_recovery)

    p = sub.add_parser("stats", help="matching/transversal/fractional numbers")
    add_common(p)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--symbols", help="restrict to these data symbols (partial)")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("check", help="is a demand vector servable?")
    add_common(p)
    p.add_argument("--demand", required=True, help='rates like "1,1,1/3,2"')
    p.add_argument("--capacity", default="1")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("max", help="maximize a weighted sum of service rates")
    add_common(p)
    p.add_argument("--weights", required=True)
    p.add_argument("--capacity", default="1")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=_cmd_max)

    p = sub.add_parser("lambda-star", help="largest single-object rate")
    add_common(p)
    p.add_argument("--symbol", help="one symbol (default: all)")
    p.add_argument("--capacity", default="1")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=_cmd_lambda_star)

    p = sub.add_parser("delta", help="largest uniform simplex in the region")
    add_common(p)
    p.add_argument("--capacity", default="1")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=_cmd_delta)

    p = sub.add_parser("subset", help="ceiling on a subset's total rate")
    add_common(p)
    p.add_argument("--symbols", required=True, help='e.g. "a,b,c" or "1,2,3"')
    p.add_argument("--capacity", default="1")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=_cmd_subset)

    p = sub.add_parser("waterfill", help="greedy request-splitting allocation")
    add_common(p)
    p.add_argument("--demand", required=True)
    p.add_argument("--capacity", default="1")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--max-events", type=int, default=10000)
    p.set_defaults(func=_cmd_waterfill)

    p = sub.add_parser("m3", help="triples whose pairwise sums close at 3")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_m3)

    p = sub.add_parser("verify", help="machine-check every law on one code")
    p.add_argument("-r", type=int)
    p.add_argument("-q", type=int)
    p.add_argument("--systematic", action="store_true")
    p.add_argument("--code", help="verify this code file instead")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=40)
    p.add_argument("--out")
    p.add_argument("--pivot-limit", type=int, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("slice", help="CSV membership grid over chosen axes")
    add_common(p)
    p.add_argument("--axes", required=True, help='e.g. "a,b,c"')
    p.add_argument("--fix", help='e.g. "d=0,e=1/2"')
    p.add_argument("--max", required=True)
    p.add_argument("--step", required=True)
    p.add_argument("--capacity", default="1")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=_cmd_slice)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload = args.func(args)
    except (lp.PivotLimitError, srr.EventLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ArithmeticError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: bad JSON input: {exc}", file=sys.stderr)
        return 2
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
