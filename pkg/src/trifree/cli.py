"""Command-line interface.

Exit codes: 0 success, 1 a predicate or comparison failed, 2 usage error,
3 unreadable graph6 input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Iterable, TextIO

from . import __version__
from .canon import canonicalize
from .cayley import (
    MAX_SEARCH_K,
    AbelianGroup,
    classify_prime_power_orders,
    counting_feasibility,
    enumerate_connection_sets,
    prime_powers,
    ramanujan_nagell,
)
from .census import CensusRow, published_rows, summarise
from .constructions import NAMES, ExpansionSpec, cycle_expansion, enumerate_valid_matchings, kneser, named
from .graph import Graph, Graph6Error, GraphError, read_graph6_lines, to_graph6
from .process import experiment
from .properties import (
    RejectedInput,
    check_degree_bound,
    check_degree_sum_inequalities,
    max_degree_floor,
    witness_report,
)
from .search import OPS, SearchConfig, closure, default_workers, enumerate_witnesses

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_PARSE = 3


class UsageError(Exception):
    pass


def _emit(out: TextIO, record: dict) -> None:
    out.write(json.dumps(record) + "\n")


def _open_input(path: str) -> TextIO:
    if path == "-":
        return sys.stdin
    try:
        return open(path, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _read_graphs(path: str) -> list[Graph]:
    handle = _open_input(path)
    try:
        return [g for _, g in read_graph6_lines(handle)]
    finally:
        if handle is not sys.stdin:
            handle.close()


def _theorem_record(g: Graph, t: int) -> dict | None:
    try:
        lower, mid, upper, ok = check_degree_sum_inequalities(g, t)
        return {
            "degree_bound": check_degree_bound(g, t),
            "degree_sum": {"lower": str(lower), "pairs": mid, "squares": upper, "holds": ok},
            "max_degree_floor": max_degree_floor(g),
        }
    except RejectedInput as exc:
        return {"rejected": exc.prop}


def cmd_verify(args, out: TextIO) -> int:
    status = EXIT_OK
    handle = _open_input(args.input)
    try:
        for lineno, g in read_graph6_lines(handle):
            report = witness_report(g, args.s, args.t)
            rec = {"line": lineno, **report.to_record()}
            if args.theorems:
                rec["theorems"] = _theorem_record(g, args.t)
            _emit(out, rec)
            if not report.is_witness:
                status = EXIT_FAIL
    finally:
        if handle is not sys.stdin:
            handle.close()
    return status


def cmd_enumerate(args, out: TextIO) -> int:
    cfg = SearchConfig(n_max=args.n_max, n_min=args.n_min, s=args.s, t=args.t, workers=args.workers)
    result = enumerate_witnesses(cfg)
    target = open(args.output, "w", encoding="utf-8", newline="\n") if args.output else out
    try:
        for g in result.all_graphs():
            target.write(to_graph6(g) + "\n")
    finally:
        if target is not out:
            target.close()
    if args.census:
        with open(args.census, "w", encoding="utf-8", newline="\n") as fh:
            for row in result.census:
                fh.write(json.dumps(row.to_record()) + "\n")
    status = EXIT_OK
    if args.check_census:
        if (args.s, args.t) != (2, 3):
            raise UsageError("--check-census applies to s=2, t=3 only")
        expected = [r for r in published_rows(args.n_max) if r.n >= args.n_min]
        if result.census != expected:
            status = EXIT_FAIL
        print(json.dumps({"census_matches": status == EXIT_OK, "counts": result.counts()}), file=sys.stderr)
    return status


def cmd_cayley(args, out: TextIO) -> int:
    if args.ramanujan_nagell is not None:
        _emit(out, {"ramanujan_nagell": sorted(ramanujan_nagell(args.ramanujan_nagell))})
        return EXIT_OK
    if args.prime_powers is not None:
        for n, p, a in prime_powers(args.prime_powers):
            # the elementary abelian group is the one shape where both criteria can apply
            verdict = counting_feasibility(AbelianGroup([p] * a))
            _emit(out, {"order": n, "p": p, "a": a, "status": verdict.status, "k": verdict.k})
        return EXIT_OK
    if args.classify is not None:
        for row in classify_prime_power_orders(args.classify):
            _emit(out, {"order": row.order, "k": row.implied_k, "groups": row.groups, "total": row.total})
        return EXIT_OK
    if args.group is None:
        raise UsageError("cayley needs --group, --classify, --prime-powers or --ramanujan-nagell")
    group = AbelianGroup.parse(args.group)
    ks = [args.k] if args.k is not None else range(1, min(group.order - 1, MAX_SEARCH_K) + 1)
    total = 0
    for k in ks:
        for cls in enumerate_connection_sets(group, k, args.s, args.t):
            _emit(out, cls.to_record())
            total += 1
    print(json.dumps({"group": list(group.factors), "classes": total}), file=sys.stderr)
    return EXIT_OK


def cmd_construct(args, out: TextIO) -> int:
    if args.name == "kneser":
        if args.n is None or args.k is None:
            raise UsageError("kneser needs --n and --k")
        g = kneser(args.n, args.k)
    elif args.name == "expansion":
        if args.k is None or args.l is None:
            raise UsageError("expansion needs --k and --l")
        options = enumerate_valid_matchings(args.cycle)
        if not 0 <= args.choice < len(options):
            raise UsageError(f"--choice must lie in 0..{len(options) - 1}")
        g = cycle_expansion(ExpansionSpec.uniform(args.k, args.l, args.cycle, args.choice))
    else:
        g = named(args.name)
    out.write(to_graph6(g) + "\n")
    return EXIT_OK


def cmd_closure(args, out: TextIO) -> int:
    seeds = _read_graphs(args.seeds)
    ops = [op.strip() for op in args.ops.split(",") if op.strip()]
    result = closure(seeds, ops, args.s, args.t, args.budget)
    for form in sorted(result.forms):
        out.write(form + "\n")
    print(json.dumps({"graphs": len(result.forms), "truncated": result.truncated}), file=sys.stderr)
    return EXIT_OK


def cmd_process(args, out: TextIO) -> int:
    summary = experiment(
        args.n,
        args.s,
        args.t,
        args.trials,
        args.seed,
        exact_limit=args.exact_limit,
        probe=not args.no_probe,
        workers=args.workers,
    )
    for rec in summary.trials:
        _emit(out, rec.to_record())
    _emit(out, summary.to_record())
    if args.dump:
        with open(args.dump, "w", encoding="utf-8", newline="\n") as fh:
            for g in summary.graphs:
                fh.write(to_graph6(g) + "\n")
    return EXIT_OK if summary.all_saturated else EXIT_FAIL


def _row_from_record(rec: dict) -> CensusRow:
    degrees = tuple(sorted((int(d), c) for d, c in rec["degrees"].items()))
    aut = rec.get("aut_order", [0, 0])
    orbits = rec.get("orbits", [0, 0])
    return CensusRow(rec["n"], rec["edges"], degrees, str(rec["girth"]), tuple(aut), tuple(orbits), rec.get("count", 1))


def cmd_corpus(args, out: TextIO) -> int:
    try:
        manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot load manifest {args.manifest}: {exc}") from None
    data_path = Path(args.manifest).parent / manifest["file"]
    s, t = manifest.get("s", 2), manifest.get("t", 3)
    graphs = _read_graphs(str(data_path))
    failures = []
    stats = []
    for i, g in enumerate(graphs, start=1):
        report = witness_report(g, s, t)
        if not report.is_witness:
            failures.append({"index": i, **report.to_record()})
        rep = canonicalize(g)
        stats.append((g, rep.aut_order, rep.orbit_count))
    rows = summarise(stats)
    expected = [_row_from_record(r) for r in manifest.get("rows", [])]
    mismatched = []
    if expected:
        got = {r.key: r for r in rows}
        want = {r.key: r for r in expected}
        for key in sorted(set(got) | set(want)):
            a, b = got.get(key), want.get(key)
            if a is None or b is None or a.count != b.count or _stats_differ(a, b):
                mismatched.append({"row": list(map(str, key)), "found": a.to_record() if a else None, "expected": b.to_record() if b else None})
    counts: dict[str, int] = {}
    for g in graphs:
        counts[str(g.n)] = counts.get(str(g.n), 0) + 1
    ok = not failures and not mismatched and len(graphs) == manifest.get("count", len(graphs))
    _emit(out, {
        "file": manifest["file"],
        "graphs": len(graphs),
        "expected": manifest.get("count"),
        "per_order": counts,
        "non_witnesses": failures,
        "row_mismatches": mismatched,
        "ok": ok,
    })
    return EXIT_OK if ok else EXIT_FAIL


def _stats_differ(a: CensusRow, b: CensusRow) -> bool:
    # ranges of zero mean "not recorded" in a manifest
    if b.aut_range != (0, 0) and a.aut_range != b.aut_range:
        return True
    if b.orbit_range != (0, 0) and a.orbit_range != b.orbit_range:
        return True
    return False


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trifree", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_st(p, s=2, t=3):
        p.add_argument("--s", type=_positive, default=s, help=f"size of the smaller side of the forbidden K_(s,t) (default {s})")
        p.add_argument("--t", type=_positive, default=t, help=f"size of the larger side (default {t})")

    p = sub.add_parser("verify", help="check graph6 input against the witness predicate")
    p.add_argument("input", nargs="?", default="-", help="graph6 file, or - for standard input")
    add_st(p)
    p.add_argument("--theorems", action="store_true", help="also evaluate the degree inequalities for each witness")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list all witnesses up to a given order")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--n-min", type=int, default=4)
    add_st(p)
    p.add_argument("--workers", type=_positive, default=default_workers(), help="worker processes (default from TRIFREE_WORKERS, else 1)")
    p.add_argument("--output", help="graph6 output file (default standard output)")
    p.add_argument("--census", help="write census rows as JSON lines to this file")
    p.add_argument("--check-census", action="store_true", help="compare against the published census rows; exit 1 on mismatch")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("cayley", help="search connection sets of abelian groups")
    p.add_argument("--group", help="cyclic factors, e.g. 2,2,2,2 or 13")
    p.add_argument("--k", type=_positive, help="connection set size (default: every size up to %d)" % MAX_SEARCH_K)
    add_st(p)
    p.add_argument("--classify", type=int, metavar="LIMIT", help="classify feasible prime-power orders below LIMIT")
    p.add_argument("--prime-powers", type=int, metavar="LIMIT", help="report the counting test for prime powers below LIMIT")
    p.add_argument("--ramanujan-nagell", type=int, metavar="LIMIT", help="exponents m <= LIMIT with 2^m - 7 a square")
    p.set_defaults(func=cmd_cayley)

    p = sub.add_parser("construct", help="print a named or constructed graph in graph6")
    p.add_argument("name", choices=NAMES + ("kneser", "expansion"))
    p.add_argument("--n", type=int, help="ground set size for kneser")
    p.add_argument("--k", type=int, help="subset size for kneser, or first part size for expansion")
    p.add_argument("--l", type=int, help="second part size for expansion")
    p.add_argument("--cycle", type=int, choices=(4, 5), default=4, help="cycle length for expansion")
    p.add_argument("--choice", type=int, default=0, help="index of the valid matching used on every pair")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("closure", help="close a set of witnesses under local moves")
    p.add_argument("--seeds", required=True, help="graph6 file of seed graphs, or -")
    p.add_argument("--ops", default=",".join(OPS), help="comma-separated subset of %s" % ",".join(OPS))
    add_st(p)
    p.add_argument("--budget", type=_positive, default=10_000)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("process", help="run seeded trials of the constrained random process")
    p.add_argument("--n", type=int, required=True)
    add_st(p)
    p.add_argument("--trials", type=_positive, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--exact-limit", type=int, default=12, help="largest order probed exactly")
    p.add_argument("--no-probe", action="store_true", help="skip the diameter-2 subgraph probe")
    p.add_argument("--workers", type=_positive, default=default_workers())
    p.add_argument("--dump", help="write final graphs in graph6 to this file")
    p.set_defaults(func=cmd_process)

    p = sub.add_parser("corpus", help="ingest a graph6 corpus described by a JSON manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: Iterable[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except Graph6Error as exc:
        print(f"trifree: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, ValueError, KeyError, GraphError) as exc:
        parser.print_usage(sys.stderr)
        message = exc.args[0] if isinstance(exc, KeyError) else exc
        print(f"trifree: error: {message}", file=sys.stderr)
        return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
