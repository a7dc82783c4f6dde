"""Command line front end: generate graphs, sparsify, compute forests, verify.

Exit codes: 0 success, 1 a verification or certificate failure, 2 usage or
input errors.
"""

from __future__ import annotations

import argparse
import csv
import sys

from .engine import RoutingMode
from .graph import (
    GRAPH_MODELS,
    Graph,
    dump_graph,
    gen_graph,
    msf_oracle,
    read_graph,
    write_graph,
)
from .sparsify import MAX_EPS_EXP, CertificateError, SparsifyResult, mst, sparsify

METRICS_COLUMNS = (
    "iter",
    "eps_exp",
    "edges_before",
    "edges_after",
    "rounds_charged",
    "rounds_explicit",
    "cert_ok",
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliquemst",
        description="Round-counted graph sparsification and spanning forests.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("--n", type=int, required=True, help="number of vertices")
    p.add_argument("--model", choices=GRAPH_MODELS, required=True)
    p.add_argument("--p", type=float, help="edge probability (gnp)")
    p.add_argument("--m", type=int, help="edge count (gnm, forest)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-", help="output path, - for stdout")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("sparsify", help="run amplification steps, report round costs")
    p.add_argument("--in", dest="infile", required=True, help="input graph file")
    p.add_argument("--k", type=int, required=True, help=f"steps, 0..{MAX_EPS_EXP}")
    p.add_argument("--mode", choices=[m.value for m in RoutingMode], default="charged")
    p.add_argument("--verify", action="store_true", help="replay guarantees locally")
    p.add_argument("--out", help="write surviving edges as a graph file")
    p.add_argument("--metrics", help="write the CSV here instead of stdout")
    p.set_defaults(func=_cmd_sparsify)

    p = sub.add_parser("mst", help="compute the minimum spanning forest")
    p.add_argument("--in", dest="infile", required=True, help="input graph file")
    p.add_argument("--mode", choices=[m.value for m in RoutingMode], default="charged")
    p.add_argument("--verify", action="store_true", help="check against the local oracle")
    p.add_argument("--out", help="write the forest as a graph file")
    p.set_defaults(func=_cmd_mst)

    p = sub.add_parser("verify", help="check a claimed minimum spanning forest")
    p.add_argument("graph", help="graph file")
    p.add_argument("forest", help="claimed forest file")
    p.set_defaults(func=_cmd_verify)

    return parser


def _write_out(g: Graph, out: str) -> None:
    if out == "-":
        dump_graph(g, sys.stdout)
    else:
        write_graph(g, out)


def _cmd_gen(args: argparse.Namespace) -> int:
    kwargs: dict = {}
    if args.model == "gnp":
        kwargs["p"] = args.p
    elif args.model == "gnm":
        kwargs["m"] = args.m
    elif args.model == "forest":
        # a forest with m edges on n vertices has n - m trees
        kwargs["t"] = args.n - args.m if args.m is not None else 1
    g = gen_graph(args.n, args.model, args.seed, **kwargs)
    _write_out(g, args.out)
    return 0


def _write_metrics(res: SparsifyResult, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(METRICS_COLUMNS)
    for it in res.iterations:
        writer.writerow(
            [
                it.index,
                it.eps_exp,
                it.edges_before,
                it.edges_after,
                it.rounds_charged,
                "" if it.rounds_explicit is None else it.rounds_explicit,
                "true" if it.cert.passed else "false",
            ]
        )
    first = res.iterations[0].edges_before if res.iterations else len(res.edges)
    m = res.metrics
    writer.writerow(
        [
            "total",
            res.scheme.eps_exp,
            first,
            len(res.edges),
            m.rounds_charged,
            "" if m.rounds_explicit is None else m.rounds_explicit,
            "true" if res.cert.passed else "false",
        ]
    )


def _cmd_sparsify(args: argparse.Namespace) -> int:
    g = read_graph(args.infile)
    res = sparsify(g, args.k, mode=RoutingMode(args.mode), verify=args.verify)
    if args.metrics:
        with open(args.metrics, "w", encoding="utf-8", newline="") as fh:
            _write_metrics(res, fh)
    else:
        _write_metrics(res, sys.stdout)
    if args.out:
        _write_out(Graph(g.n, res.edges), args.out)
    return 0


def _cmd_mst(args: argparse.Namespace) -> int:
    g = read_graph(args.infile)
    res = mst(g, mode=RoutingMode(args.mode), verify=args.verify)
    m = res.metrics
    learn = m.phases["learn"].rounds_charged if "learn" in m.phases else 0
    explicit = "-" if m.rounds_explicit is None else str(m.rounds_explicit)
    weight = sum(e.w for e in res.forest.edges)
    print(
        f"n={g.n} k={res.k} forest_edges={len(res.forest.edges)} weight={weight} "
        f"rounds_charged={m.rounds_charged} rounds_explicit={explicit} learn_rounds={learn}"
    )
    if args.out:
        _write_out(Graph(g.n, res.forest.edges), args.out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    g = read_graph(args.graph)
    claimed = read_graph(args.forest)
    if claimed.n != g.n:
        print(f"mismatch: graph has n={g.n}, forest file has n={claimed.n}")
        return 1
    have = set(g.edges)
    stray = [e for e in claimed.edges if e not in have]
    if stray:
        e = stray[0]
        print(f"mismatch: edge ({e.u}, {e.v}, {e.w}) is not in the graph")
        return 1
    want = set(msf_oracle(g).edges)
    got = set(claimed.edges)
    if got != want:
        missing = len(want - got)
        extra = len(got - want)
        print(f"mismatch: {missing} forest edges missing, {extra} edges should not be there")
        return 1
    weight = sum(e.w for e in claimed.edges)
    print(f"ok: minimum spanning forest, edges={len(claimed.edges)} weight={weight}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CertificateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
