"""Command-line interface: ``subsetdfa gen|build|query|stats|bench``.

Exit codes: 0 success, 1 usage error, 2 input format error, 3 state budget
exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .builder import BuildBudgetExceeded, alpha_estimate, build_automaton
from .core import MINIMAL, DictionaryError
from .formats import (
    FormatError,
    format_dictionary,
    parse_queries,
    read_automaton,
    read_dictionary,
    write_atomic,
    write_automaton,
)
from .gen import InstanceParams, generate_delta_instance, generate_instance, generate_wildcard_instance
from .matcher import QueryError, count_accepted_strings, depth_histogram, match_membership, match_retrieve
from .minimizer import minimize

EXIT_USAGE, EXIT_FORMAT, EXIT_BUDGET = 1, 2, 3

# bench method name -> (kind, pc, minimize afterwards)
METHODS = {
    "pm": ("pm", False, False),
    "min": ("pm", False, True),
    "pmpc": ("pm", True, False),
    "trie": ("trie", False, False),
    "triepc": ("trie", True, False),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-m", type=int, required=True, help="string length")
    p.add_argument("-n", type=int, required=True, help="number of strings")
    p.add_argument("-s", "--sigma", type=int, required=True, help="alphabet size")
    p.add_argument("--dl", type=int, default=1, help="smallest subset size")
    p.add_argument("--dh", type=int, default=1, help="largest subset size")
    p.add_argument("-f", type=float, default=0.0, help="probability of a subset position")


def _params(args, seed: int) -> InstanceParams:
    try:
        return InstanceParams(args.m, args.n, args.sigma, args.dl, args.dh, args.f, seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_gen(args) -> int:
    try:
        if args.mode == "random":
            d = generate_instance(_params(args, args.seed))
        elif args.mode == "delta":
            d = generate_delta_instance(args.m, args.n, args.sigma, args.delta, args.seed)
        else:
            d = generate_wildcard_instance(args.m, args.n, args.sigma, args.k, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(format_dictionary(d), args.out)
    return 0


def _build(d, kind: str, pc: bool, max_states: int | None):
    if kind == MINIMAL:
        return minimize(build_automaton(d, "pm", False, max_states=max_states))
    return build_automaton(d, kind, pc, max_states=max_states)


def cmd_build(args) -> int:
    if args.kind == MINIMAL and args.pc:
        raise UsageError("--kind min cannot be combined with --pc")
    d = read_dictionary(args.input)
    t0 = time.perf_counter()
    a = _build(d, args.kind, args.pc, args.max_states)
    build_ms = (time.perf_counter() - t0) * 1000
    if args.out:
        write_automaton(a, args.out)
    print(f"states={a.num_states} accepting={a.num_accepting} build_ms={build_ms:.0f} dprime={count_accepted_strings(a)}")
    return 0


def cmd_query(args) -> int:
    dictionary = read_dictionary(args.dict) if args.dict else None
    a = read_automaton(args.index, dictionary)
    if a.pc and dictionary is None:
        raise UsageError("path-compressed index needs --dict")
    if args.queries:
        queries = parse_queries(Path(args.queries).read_text(encoding="utf-8"), a.sigma)
    else:
        queries = parse_queries(" ".join(args.symbols), a.sigma)
    out = []
    for p in queries:
        if a.kind == MINIMAL:
            out.append("yes" if match_membership(a, p) else "no")
        else:
            ids = match_retrieve(a, p)
            out.append(",".join(map(str, ids)) if ids else "-")
    sys.stdout.write("".join(line + "\n" for line in out))
    return 0


def cmd_stats(args) -> int:
    dictionary = read_dictionary(args.dict) if args.dict else None
    a = read_automaton(args.index, dictionary)
    csv = "depth,states\n" + "".join(f"{k},{c}\n" for k, c in depth_histogram(a))
    _emit(csv, args.hist)
    if args.n is not None and args.delta is not None:
        sigma = args.sigma if args.sigma is not None else a.sigma
        try:
            alpha = alpha_estimate(args.n, sigma, args.delta)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        print(f"alpha={alpha:.2f}", file=sys.stdout if args.hist else sys.stderr)
    return 0


def cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise UsageError(f"unknown methods: {', '.join(unknown)} (choose from {', '.join(METHODS)})")
    seeds = [int(s) for chunk in args.seed for s in str(chunk).split(",") if s]
    print("method,states,time_ms,dprime")
    for seed in seeds:
        params = _params(args, seed)
        if len(seeds) > 1:
            print(f"# seed={seed} {params.label()}")
        d = generate_instance(params)
        for name in methods:
            kind, pc, mini = METHODS[name]
            t0 = time.perf_counter()
            try:
                a = build_automaton(d, kind, pc, max_states=args.max_states)
                if mini:
                    a = minimize(a)
            except BuildBudgetExceeded as exc:
                print(f"{name}: {exc}", file=sys.stderr)
                print(f"{name},-,-,-")
                continue
            ms = (time.perf_counter() - t0) * 1000
            timing = "-" if args.no_timing else f"{ms:.0f}"
            print(f"{name},{a.num_states},{timing},{count_accepted_strings(a)}", flush=True)
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subsetdfa", description="Index subset-string dictionaries as acyclic DFAs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a random dictionary")
    p.add_argument("--mode", choices=("random", "delta", "wildcard"), default="random")
    p.add_argument("-m", type=int, required=True, help="string length")
    p.add_argument("-n", type=int, required=True, help="number of strings")
    p.add_argument("-s", "--sigma", type=int, required=True, help="alphabet size")
    p.add_argument("--dl", type=int, default=1, help="smallest subset size (random mode)")
    p.add_argument("--dh", type=int, default=1, help="largest subset size (random mode)")
    p.add_argument("-f", type=float, default=0.0, help="subset probability (random mode)")
    p.add_argument("--delta", type=int, default=0, help="half width of each range (delta mode)")
    p.add_argument("-k", type=int, default=0, help="wildcards per string (wildcard mode)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="build an index from a dictionary file")
    p.add_argument("--in", dest="input", required=True, help="dictionary file")
    p.add_argument("--kind", choices=("trie", "pm", "min"), default="pm")
    p.add_argument("--pc", action="store_true", help="leaf path compression")
    p.add_argument("--out", help="write the automaton here")
    p.add_argument("--max-states", type=int, default=None, help="abort beyond this many states")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="match simple strings against an index")
    p.add_argument("--index", required=True, help="automaton file")
    p.add_argument("--dict", help="source dictionary (required for path-compressed indexes)")
    p.add_argument("--queries", help="file with one query per line")
    p.add_argument("symbols", nargs="*", help="a single query given inline")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("stats", help="depth histogram of an index as CSV")
    p.add_argument("--index", required=True)
    p.add_argument("--dict", help="source dictionary (optional)")
    p.add_argument("--hist", help="CSV output file (default: stdout)")
    p.add_argument("--n", type=int, help="dictionary size for the alpha estimate")
    p.add_argument("--sigma", type=int, help="alphabet size for the alpha estimate")
    p.add_argument("--delta", type=float, help="average subset size for the alpha estimate")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="build several methods on generated instances")
    _instance_args(p)
    p.add_argument("--methods", default="pm,min,pmpc,trie,triepc", help="comma-separated: " + ",".join(METHODS))
    p.add_argument("--seed", action="append", default=None, help="seed (repeatable or comma-separated)")
    p.add_argument("--max-states", type=int, default=40_000_000)
    p.add_argument("--no-timing", action="store_true", help="print '-' for time_ms (byte-stable output)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.command == "bench" and args.seed is None:
        args.seed = ["0"]
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"subsetdfa: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, DictionaryError, QueryError) as exc:
        print(f"subsetdfa: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except BuildBudgetExceeded as exc:
        print(f"subsetdfa: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"subsetdfa: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
