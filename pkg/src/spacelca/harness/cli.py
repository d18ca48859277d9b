"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 parameter error,
3 a query returned Fail (failure budget exceeded).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..entropy import Entropy
from ..errors import ParameterError
from ..graph import Graph
from . import drivers
from .generators import gen_graph, gen_hypergraph_cycle

EXIT_OK, EXIT_VERIFY, EXIT_PARAM, EXIT_BUDGET = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def dump_json(obj) -> str:
    # insertion order is the stable field order; no key sorting so reports read top-down
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _params(text: str | None) -> dict:
    if not text:
        return {}
    try:
        value = json.loads(Path(text[1:]).read_text() if text.startswith("@") else text)
    except (json.JSONDecodeError, OSError) as exc:
        raise ParameterError(f"--params: {exc}") from exc
    if not isinstance(value, dict):
        raise ParameterError("--params must be a JSON object")
    return value


def _queries(args) -> list[int] | None:
    if getattr(args, "queries", None) is None:
        return None
    text = args.queries.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ParameterError(f"--queries: {exc}") from exc


def _config(args) -> drivers.RunConfig:
    return drivers.RunConfig(
        instance=drivers.load_instance(args.instance),
        seed=args.seed,
        params=_params(args.params),
        queries=_queries(args),
        permutations=getattr(args, "permutations", 0),
        parallel=args.parallel,
        timing=args.timing,
    )


def _check_kind(config: drivers.RunConfig, want_graph: bool) -> None:
    if isinstance(config.instance, Graph) != want_graph:
        raise ParameterError("instance type does not match the subcommand")


def cmd_gen_hypergraph(args) -> int:
    _emit(gen_hypergraph_cycle(args.N, args.k).dumps(), args.out)
    return EXIT_OK


def cmd_gen_graph(args) -> int:
    g = gen_graph(args.n, args.d, args.density, Entropy(args.seed).child("gen-graph"))
    _emit(g.dumps(), args.out)
    return EXIT_OK


def _cmd_answer(args, want_graph: bool) -> int:
    config = _config(args)
    _check_kind(config, want_graph)
    report, answers = drivers.run_queries(config)
    _emit(drivers.answers_csv(answers), args.out)
    if args.report:
        Path(args.report).write_text(dump_json(report), encoding="utf-8")
    return EXIT_BUDGET if report["failures"] else EXIT_OK


def cmd_color(args) -> int:
    return _cmd_answer(args, want_graph=False)


def cmd_mis(args) -> int:
    return _cmd_answer(args, want_graph=True)


def cmd_verify(args) -> int:
    config = _config(args)
    if args.answers:
        kind, values = drivers.parse_answers_csv(Path(args.answers).read_text(encoding="utf-8"))
        if (kind == "mis") != isinstance(config.instance, Graph):
            raise ParameterError("answers file does not match the instance type")
        report = {"kind": kind, "answers_file": args.answers, **drivers.verify_answers(config.instance, values)}
        failed = any(v is None for v in values.values())
    else:
        report = drivers.run_full_verify(config)
        failed = bool(report["failures"])
    _emit(dump_json(report), args.out)
    if failed:
        return EXIT_BUDGET
    return EXIT_OK if report["verdict"] else EXIT_VERIFY


def cmd_consistency(args) -> int:
    report = drivers.run_consistency_check(_config(args))
    _emit(dump_json(report), args.out)
    return EXIT_OK if report["consistent"] else EXIT_VERIFY


def cmd_tree_stats(args) -> int:
    rows = []
    for D in args.D:
        rows += drivers.run_tree_stats(D, args.samples, args.seed, N=args.N, safety_cap=args.cap)
    _emit(drivers.tree_stats_csv(rows), args.out)
    if args.report:
        gw = [drivers.run_gw_stats(D, args.samples, args.seed) for D in args.D if D >= 2]
        Path(args.report).write_text(dump_json({"rows": rows, "gw": gw}), encoding="utf-8")
    return EXIT_OK


def cmd_gw_stats(args) -> int:
    reports = [drivers.run_gw_stats(D, args.samples, args.seed, args.n_lo, args.n_hi) for D in args.D]
    _emit(dump_json(reports[0] if len(reports) == 1 else reports), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spacelca", description="Local computation algorithms for 2-coloring and MIS.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, instance=True):
        sp.add_argument("--seed", default="00", help="master seed, hex")
        sp.add_argument("--out", help="output path (default stdout)")
        if instance:
            sp.add_argument("instance", help="instance file (H or G header)")
            sp.add_argument("--params", help="JSON object of parameter overrides, or @file.json")
            sp.add_argument("--parallel", type=int, default=1, help="worker threads")
            sp.add_argument("--timing", action="store_true", help="add wall-time percentiles to the report")
            group = sp.add_mutually_exclusive_group()
            group.add_argument("--all", action="store_true", help="query every vertex in ascending order (default)")
            group.add_argument("--queries", help="comma-separated vertex ids")

    sp = sub.add_parser("gen-hypergraph", help="k-uniform cycle hypergraph")
    sp.add_argument("--N", type=int, required=True, help="number of edges")
    sp.add_argument("--k", type=int, required=True, help="edge size")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen_hypergraph)

    sp = sub.add_parser("gen-graph", help="random bounded-degree graph")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--density", type=float, default=1.0)
    common(sp, instance=False)
    sp.set_defaults(func=cmd_gen_graph)

    for name, func, helptext in (("color", cmd_color, "answer coloring queries"), ("mis", cmd_mis, "answer MIS queries")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--report", help="also write a JSON report here")
        sp.set_defaults(func=func)

    sp = sub.add_parser("verify", help="sweep all vertices (or read --answers) and verify")
    common(sp)
    sp.add_argument("--answers", help="answers CSV to verify instead of recomputing")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("consistency", help="compare answers across query orders and a parallel batch")
    common(sp)
    sp.add_argument("--permutations", type=int, default=5)
    sp.set_defaults(func=cmd_consistency)

    sp = sub.add_parser("tree-stats", help="Monte-Carlo query-tree sizes")
    sp.add_argument("--D", type=int, nargs="+", default=[2, 3])
    sp.add_argument("--samples", type=int, default=10**5)
    sp.add_argument("--N", type=int, default=1000, help="instance size for the 1-1/N^2 quantile")
    sp.add_argument("--cap", type=int, default=10**6, help="per-tree safety cap")
    sp.add_argument("--report", help="also write a JSON report with GW tail fits")
    common(sp, instance=False)
    sp.set_defaults(func=cmd_tree_stats)

    sp = sub.add_parser("gw-stats", help="Galton-Watson total-progeny tail fit")
    sp.add_argument("--D", type=int, nargs="+", default=[2])
    sp.add_argument("--samples", type=int, default=10**6)
    sp.add_argument("--n-lo", type=int, default=20)
    sp.add_argument("--n-hi", type=int, default=60)
    common(sp, instance=False)
    sp.set_defaults(func=cmd_gw_stats)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
