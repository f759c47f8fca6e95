"""Command-line front end.

Subcommands: node-sim (similarity matrix of two graph files), graph-sim
(one whole-graph score), experiment (subgraph matching accuracy grid),
classify (leave-one-out kNN over a CNF corpus).

Exit codes: 0 on success, 1 on malformed or unreadable input files (the
diagnostic names the file and line), 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import sys

from .baseline_methods import blondel_similarity, zager_similarity
from .experiments import (
    METHOD_ORDER,
    SubgraphExperimentConfig,
    knn_classify,
    read_manifest,
    run_subgraph_experiment,
    write_report_csv,
    write_report_json,
)
from .graph_core import ParseError, read_graph_file
from .graph_measures import graph_similarity, optimal_node_matching
from .neighbor_matching import NMConfig, nm_similarity

_VARIANTS = {
    "min": "min_denominator",
    "max": "max_denominator",
    "avg": "matrix_average",
}


def _add_method_flags(sub):
    sub.add_argument("graph_a", help="first graph file (text format)")
    sub.add_argument("graph_b", help="second graph file (text format)")
    sub.add_argument(
        "--method", choices=("nm", "blondel", "zv"), default="nm",
        help="similarity method (default nm)",
    )
    sub.add_argument("--epsilon", type=float, default=1e-4,
                     help="convergence threshold (default 1e-4)")
    sub.add_argument("--max-iters", type=int, default=1000,
                     help="iteration cap (default 1000)")
    sub.add_argument(
        "--complement", choices=("off", "on", "auto"), default="off",
        help="nm only: compare complement graphs instead (auto keys off density)",
    )
    sub.add_argument("--density-threshold", type=float, default=0.5,
                     help="density above which --complement auto activates")


def _similarity(args):
    ga = read_graph_file(args.graph_a)
    gb = read_graph_file(args.graph_b)
    if args.method == "nm":
        cfg = NMConfig(
            epsilon=args.epsilon,
            max_iterations=args.max_iters,
            complement_mode=args.complement,
            density_threshold=args.density_threshold,
        )
        return nm_similarity(ga, gb, cfg)
    if args.complement != "off":
        raise ValueError("--complement applies only to --method nm")
    if args.method == "blondel":
        return blondel_similarity(ga, gb, args.epsilon, args.max_iters)
    return zager_similarity(ga, gb, args.epsilon, args.max_iters)


def _cmd_node_sim(args) -> int:
    res = _similarity(args)
    for row in res.matrix:
        print(",".join(f"{v:.6f}" for v in row))
    print(
        f"iterations={res.iterations} converged={str(res.converged).lower()} "
        f"complement={str(res.complement_applied).lower()}",
        file=sys.stderr,
    )
    return 0


def _cmd_graph_sim(args) -> int:
    res = _similarity(args)
    value = graph_similarity(res.matrix, _VARIANTS[args.variant])
    print(f"{value:.6f}")
    if args.show_matching:
        matching = optimal_node_matching(res.matrix)
        for i, j in matching.pairs:
            print(f"{i},{j},{res.matrix[i, j]:.6f}")
    return 0


def _parse_int_list(text: str):
    return tuple(int(tok) for tok in text.split(",") if tok)


def _parse_float_list(text: str):
    return tuple(float(tok) for tok in text.split(",") if tok)


def _cmd_experiment(args) -> int:
    cfg = SubgraphExperimentConfig(
        n=args.n,
        m_values=_parse_int_list(args.m),
        p_values=_parse_float_list(args.p),
        trials=args.trials,
        epsilon=args.epsilon,
        max_iterations=args.max_iters,
        methods=tuple(tok for tok in args.methods.split(",") if tok),
        seed=args.seed,
    )
    report = run_subgraph_experiment(cfg, jobs=args.jobs)
    print("method,overall_accuracy,successes,trials,wall_time_s")
    for s in report.overall:
        secs = report.wall_times.get(s.method, 0.0)
        print(f"{s.method},{s.accuracy:.4f},{s.successes},{s.trials},{secs:.1f}")
    if args.out:
        csv_path = args.out + ".csv"
        json_path = args.out + ".json"
        write_report_csv(report, csv_path)
        write_report_json(report, json_path)
        print(f"wrote {csv_path} and {json_path}", file=sys.stderr)
    return 0


def _cmd_classify(args) -> int:
    corpus = read_manifest(args.manifest)
    cfg = NMConfig(epsilon=args.epsilon, max_iterations=args.max_iters)
    result = knn_classify(
        corpus,
        k=args.k,
        sim_cfg=cfg,
        variant=_VARIANTS[args.variant],
        polarity_mode=args.polarity == "on",
    )
    print("name,label,predicted")
    for name, label, predicted in result.predictions:
        print(f"{name},{label},{predicted}")
    print(f"accuracy,{result.accuracy!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphsim",
        description="Node and graph similarity for directed colored graphs",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    node_sim = subs.add_parser(
        "node-sim", help="print the node similarity matrix of two graphs"
    )
    _add_method_flags(node_sim)
    node_sim.set_defaults(func=_cmd_node_sim)

    graph_sim = subs.add_parser(
        "graph-sim", help="print one whole-graph similarity score"
    )
    _add_method_flags(graph_sim)
    graph_sim.add_argument(
        "--variant", choices=("min", "max", "avg"), default="min",
        help="score variant (default min: matching weight over the smaller size)",
    )
    graph_sim.add_argument(
        "--show-matching", action="store_true",
        help="also print the optimal node matching as a,b,score lines",
    )
    graph_sim.set_defaults(func=_cmd_graph_sim)

    experiment = subs.add_parser(
        "experiment", help="run the subgraph matching accuracy grid"
    )
    experiment.add_argument("--n", type=int, default=15, help="host graph size")
    experiment.add_argument(
        "--m", default="8,9,10,11,12,13,14,15",
        help="comma list of subgraph sizes",
    )
    experiment.add_argument(
        "--p", default="0.2,0.4,0.6,0.8", help="comma list of edge probabilities"
    )
    experiment.add_argument("--trials", type=int, default=50,
                            help="trials per (m, p) cell (default 50)")
    experiment.add_argument(
        "--methods", default=",".join(METHOD_ORDER),
        help="comma list from NM,NM*,ZV,ZV*,Blondel",
    )
    experiment.add_argument("--seed", type=int, default=0, help="master seed")
    experiment.add_argument("--epsilon", type=float, default=1e-4)
    experiment.add_argument("--max-iters", type=int, default=1000)
    experiment.add_argument("--jobs", type=int, default=1,
                            help="worker threads (results identical regardless)")
    experiment.add_argument("--out", default=None,
                            help="report path prefix; writes <out>.csv and <out>.json")
    experiment.set_defaults(func=_cmd_experiment)

    classify = subs.add_parser(
        "classify", help="leave-one-out kNN classification of a CNF corpus"
    )
    classify.add_argument("manifest", help="manifest file: '<path> <classLabel>' lines")
    classify.add_argument("--k", type=int, default=3, help="neighbor count (default 3)")
    classify.add_argument(
        "--polarity", choices=("off", "on"), default="off",
        help="encode literal signs as edge directions (default off)",
    )
    classify.add_argument(
        "--variant", choices=("min", "max", "avg"), default="min",
        help="graph similarity variant used for neighbor ranking",
    )
    classify.add_argument("--epsilon", type=float, default=1e-4)
    classify.add_argument("--max-iters", type=int, default=1000)
    classify.set_defaults(func=_cmd_classify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
