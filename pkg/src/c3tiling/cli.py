"""Command-line front end.

Exit codes: 0 affirmative result, 1 negative result, 2 usage or I/O error,
3 timeout or indeterminate.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import barrier as barrier_mod
from .constructions import (
    barrier_tournament,
    circulant_tournament,
    ks_construction,
    near_regular_tournament,
    random_min_semidegree,
    random_regular_tournament,
)
from .formats import GraphFormatError, read_dg, read_partition, write_dg, write_partition, format_dg
from .graph_core import Thresholds
from .hypergraph import build_hypergraph
from .lattice import edge_lattice, edge_vectors, find_2_transferral, index_vector
from .reachability import SamplerConfig, linking_stats
from .solver import FOUND, OPTIMAL, PROVEN_NONE, FACTOR, UNKNOWN, decide, find_factor, max_tiling
from .stability import audit, find_gamma_extremal, verify_gamma_extremal

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3
MAX_ELL = 4


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _emit(obj, path: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _load_graph(path: str):
    try:
        return read_dg(path)
    except FileNotFoundError:
        raise UsageError(f"{path}: no such file") from None
    except GraphFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None
    except OSError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _load_partition(path: str, n: int):
    try:
        return read_partition(path, n)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: bad partition file ({exc})") from None


def cmd_gen(args) -> int:
    kind = args.kind
    partition = None
    try:
        if kind == "barrier":
            G, partition = barrier_tournament(args.m)
        elif kind == "ks":
            G, partition = ks_construction(args.m)
        elif kind == "circulant":
            G = circulant_tournament(args.n)
        elif kind == "near-regular":
            G = near_regular_tournament(args.n)
        elif kind == "random":
            G = random_min_semidegree(args.n, args.c, args.seed)
        else:
            G = random_regular_tournament(args.n, args.seed)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    comment = f"gen {kind} m={args.m} n={args.n} c={args.c} seed={args.seed}"
    if args.output:
        write_dg(G, args.output, comment)
    else:
        sys.stdout.write(format_dg(G, comment))
    if args.partition:
        if partition is None:
            raise UsageError(f"{kind} graphs carry no planted partition")
        write_partition(partition, args.partition)
    return EXIT_YES


def cmd_solve(args) -> int:
    H = build_hypergraph(_load_graph(args.file))
    res = max_tiling(H, args.timeout) if args.max_tiling else find_factor(H, args.timeout)
    _emit(res.to_json(), args.output)
    if res.outcome in (FOUND, OPTIMAL):
        return EXIT_YES
    if res.outcome == PROVEN_NONE:
        return EXIT_NO
    return EXIT_UNKNOWN


def cmd_decide(args) -> int:
    d = decide(_load_graph(args.file), args.timeout)
    _emit(d.to_json(), args.output)
    if d.outcome == FACTOR:
        return EXIT_YES
    if d.outcome == UNKNOWN:
        return EXIT_UNKNOWN
    return EXIT_NO


def cmd_barrier(args) -> int:
    G = _load_graph(args.file)
    from .solver import SearchTimeout

    try:
        cert = barrier_mod.find_divisibility_barrier(G, args.timeout)
    except SearchTimeout:
        _emit({"kind": None, "parts": None, "outcome": "timeout"}, args.output)
        return EXIT_UNKNOWN
    if cert is None:
        _emit({"kind": None, "parts": None, "outcome": "none"}, args.output)
        return EXIT_NO
    out = cert.to_json()
    out["outcome"] = "found"
    _emit(out, args.output)
    return EXIT_YES


def cmd_lattice(args) -> int:
    G = _load_graph(args.file)
    P = _load_partition(args.partition, G.n)
    H = build_hypergraph(G)
    S = edge_vectors(H, P, args.mu)
    t = find_2_transferral(S)
    total = index_vector(P, range(G.n))
    contains = total in edge_lattice(S, len(P))
    _emit({
        "edge_vectors": S.to_json(),
        "transferral": None if t is None else t.to_json(),
        "index_vector": list(total),
        "contains_total": contains,
        "mu": str(args.mu),
    }, args.output)
    return EXIT_YES if contains else EXIT_NO


def cmd_reach(args) -> int:
    if not 1 <= args.ell <= MAX_ELL:
        raise UsageError(f"--ell must lie in 1..{MAX_ELL}")
    G = _load_graph(args.file)
    for v in (args.x, args.y):
        if not 0 <= v < G.n:
            raise UsageError(f"vertex {v} out of range")
    if args.x == args.y:
        raise UsageError("--x and --y must differ")
    stats = linking_stats(build_hypergraph(G), args.x, args.y, args.beta, args.ell,
                          SamplerConfig(args.samples, args.seed))
    _emit(stats.to_json(), args.output)
    if stats.threshold_met is None:
        return EXIT_UNKNOWN
    return EXIT_YES if stats.threshold_met else EXIT_NO


def cmd_extremal(args) -> int:
    G = _load_graph(args.file)
    if not 0 < args.gamma < Fraction(1, 3):
        raise UsageError("--gamma must lie strictly between 0 and 1/3")
    exhaustive = True if args.exhaustive else None
    P = find_gamma_extremal(G, args.gamma, effort=args.effort, exhaustive=exhaustive, seed=args.seed)
    if P is None:
        _emit({"parts": None, "found": False}, args.output)
        return EXIT_NO
    out = {"parts": P.as_lists(), "found": True, "check": verify_gamma_extremal(G, P, args.gamma).to_json()}
    _emit(out, args.output)
    return EXIT_YES


def cmd_audit(args) -> int:
    G = _load_graph(args.file)
    th = Thresholds(alpha=args.alpha, beta=args.beta, xi=args.xi, eta=args.eta)
    partitions = [_load_partition(p, G.n) for p in args.partition]
    report = audit(G, th, partitions=partitions, random_sets=args.random_sets, seed=args.seed)
    _emit(report.to_json(), args.output)
    return EXIT_YES if report.all_asserted_pass else EXIT_NO


def cmd_verify_conjecture(args) -> int:
    from .conjecture import verify_conjecture

    if args.n < 1 or args.n % 2 == 0:
        raise UsageError("--n must be odd and positive")
    if args.n > 9 and not args.allow_large:
        raise UsageError("n > 9 needs --allow-large")
    tally = verify_conjecture(args.n, jobs=args.jobs, check_barriers=not args.skip_barriers,
                              allow_large=args.allow_large)
    _emit(tally.to_json(), args.output)
    return EXIT_YES if tally.holds else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="c3tiling", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="master seed for every random choice")
    p.add_argument("--timeout", type=float, default=60.0, help="search timeout in seconds")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (1 = deterministic)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, file=True):
        if file:
            sp.add_argument("file")
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")

    g = sub.add_parser("gen", help="write a generated graph in .dg format")
    g.add_argument("kind", choices=["barrier", "ks", "circulant", "near-regular", "random", "regular-sample"])
    g.add_argument("--m", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--c", type=_fraction, default=Fraction(0))
    g.add_argument("-o", "--output")
    g.add_argument("--partition", help="also write the planted partition JSON here")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="search for a factor (or a maximum tiling)")
    common(s)
    s.add_argument("--max-tiling", action="store_true")
    s.set_defaults(func=cmd_solve)

    d = sub.add_parser("decide", help="find a factor or a divisibility barrier")
    common(d)
    d.set_defaults(func=cmd_decide)

    b = sub.add_parser("barrier", help="search for a divisibility barrier")
    common(b)
    b.set_defaults(func=cmd_barrier)

    la = sub.add_parser("lattice", help="edge-vectors, transferrals and lattice membership")
    common(la)
    la.add_argument("--partition", required=True)
    la.add_argument("--mu", type=_fraction, default=Fraction(0))
    la.set_defaults(func=cmd_lattice)

    r = sub.add_parser("reach", help="linking-set statistics for a vertex pair")
    common(r)
    r.add_argument("--x", type=int, required=True)
    r.add_argument("--y", type=int, required=True)
    r.add_argument("--ell", type=int, default=1)
    r.add_argument("--beta", type=_fraction, required=True)
    r.add_argument("--samples", type=int, default=2000)
    r.set_defaults(func=cmd_reach)

    e = sub.add_parser("extremal", help="search for a gamma-extremal partition")
    common(e)
    e.add_argument("--gamma", type=_fraction, required=True)
    e.add_argument("--exhaustive", action="store_true")
    e.add_argument("--effort", type=int, default=200)
    e.set_defaults(func=cmd_extremal)

    a = sub.add_parser("audit", help="check the exact degree lemmas on a graph")
    common(a)
    a.add_argument("--alpha", type=_fraction, default=Fraction(1, 1000))
    a.add_argument("--beta", type=_fraction, default=Fraction(1, 100))
    a.add_argument("--xi", type=_fraction, default=Fraction(1, 10))
    a.add_argument("--eta", type=_fraction, default=Fraction(1, 10))
    a.add_argument("--partition", action="append", default=[])
    a.add_argument("--random-sets", type=int, default=12)
    a.set_defaults(func=cmd_audit)

    v = sub.add_parser("verify-conjecture", help="solve every labelled regular tournament on n vertices")
    common(v, file=False)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--allow-large", action="store_true")
    v.add_argument("--skip-barriers", action="store_true")
    v.set_defaults(func=cmd_verify_conjecture)
    return p


def _hoist_globals(argv: list[str]) -> list[str]:
    """Let --seed/--timeout/--jobs appear after the subcommand as well."""
    head, tail = [], []
    i = 0
    while i < len(argv):
        tok = argv[i]
        name = tok.split("=", 1)[0]
        if name in ("--seed", "--timeout", "--jobs"):
            if "=" in tok:
                head.append(tok)
                i += 1
            else:
                head.extend(argv[i:i + 2])
                i += 2
            continue
        tail.append(tok)
        i += 1
    return head + tail


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_hoist_globals(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_YES
    if args.command == "gen":
        if args.kind in ("barrier", "ks") and args.m is None:
            print("gen: --m is required for this kind", file=sys.stderr)
            return EXIT_USAGE
        if args.kind not in ("barrier", "ks") and args.n is None:
            print("gen: --n is required for this kind", file=sys.stderr)
            return EXIT_USAGE
    if args.timeout is not None and args.timeout <= 0:
        args.timeout = None
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
