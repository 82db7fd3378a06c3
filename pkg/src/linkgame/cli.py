"""Command-line interface: ``linkgame {rank,evaluate,generate,bench,verify}``.

Exit codes: 0 success, 1 usage error (bad flags or values), 2 data error
(unreadable or malformed input, or a failed verification sweep).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .datasets import DatasetUnavailable, load_dataset
from .experiment import METHODS, ExperimentConfig, MethodSpec, benchmark_csv, run_experiment, runtime_benchmark, score_graph
from .functions import KINDS, WEIGHT_FAMILIES, normalize_kind
from .games import DEFAULT_ENUMERATION_BOUND
from .generators import generate_pa
from .graph import EdgeListError, RandomSeed, nonadjacent_pair_array, write_edge_list
from .metrics import rank_candidates
from .scores import format_score


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _name_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _f_kind(text: str) -> str:
    try:
        return normalize_kind(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linkgame", description="Game-theoretic link prediction on undirected graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive_int, default=1, help="worker count (1 gives bit-stable output; default 1)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    kinds = ", ".join(k.replace("_", "-") for k in KINDS)
    p = sub.add_parser("rank", parents=[common], help="rank the non-adjacent pairs of a graph")
    p.add_argument("--graph", required=True, help="edge-list path or bundled dataset name")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--k", type=int, default=1, help="radius or number of walk steps (default 1)")
    p.add_argument("--f", type=_f_kind, default="inverse_square", help=f"distance function: {kinds} (default inverse-square)")
    p.add_argument("--weights", choices=sorted(WEIGHT_FAMILIES), default="shapley", help="semivalue weight family (default shapley)")
    p.add_argument("--cn-mode", choices=("inclusive", "strict"), default="inclusive", help="common-neighbour range test: dist <= k or dist < k")
    p.add_argument("--top", type=int, default=10, help="number of pairs to print, 0 for all (default 10)")
    p.add_argument("--out", help="write CSV here instead of stdout")

    p = sub.add_parser("evaluate", parents=[common], help="edge-removal experiment (AUC and precision)")
    p.add_argument("--graph", required=True, help="edge-list path or bundled dataset name")
    p.add_argument("--methods", type=_name_list, default=["shapley-closeness"], help="comma-separated methods (default shapley-closeness)")
    p.add_argument("--k-list", type=_int_list, default=[1, 2, 3], help="comma-separated radii (default 1,2,3)")
    p.add_argument("--f", type=_f_kind, default="inverse_square", help="distance function for closeness methods")
    p.add_argument("--weights", choices=sorted(WEIGHT_FAMILIES), default="shapley")
    p.add_argument("--cn-mode", choices=("inclusive", "strict"), default="inclusive")
    p.add_argument("--fraction", type=float, default=0.30, help="fraction of edges removed per trial (default 0.30)")
    p.add_argument("--trials", type=_positive_int, default=1000, help="number of trials (default 1000)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--out", help="output prefix; writes PREFIX.csv and PREFIX.json (default: CSV to stdout)")

    p = sub.add_parser("generate", parents=[common], help="preferential-attachment random graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m0", type=int, default=3)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the edge list here instead of stdout")

    p = sub.add_parser("bench", parents=[common], help="runtime on preferential-attachment graphs")
    p.add_argument("--sizes", type=_int_list, default=[250, 500])
    p.add_argument("--m0", type=int, default=3)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--k-list", type=_int_list, default=[1, 2, 3])
    p.add_argument("--methods", type=_name_list, default=["shapley-closeness"])
    p.add_argument("--repeats", type=_positive_int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write CSV here instead of stdout")

    p = sub.add_parser("verify", parents=[common], help="compare the kernels with exhaustive oracles")
    p.add_argument("--max-n", type=int, default=6, help=f"largest graph size, at most {DEFAULT_ENUMERATION_BOUND} (default 6)")
    p.add_argument("--k-list", type=_int_list, default=[1, 2, 3])
    return parser


def _header(args: argparse.Namespace, extra: dict | None = None) -> str:
    # the output location is not part of the configuration
    items = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}
    items.update(extra or {})
    lines = [f"# linkgame {__version__} {args.command}"]
    for k, v in items.items():
        if isinstance(v, list):
            v = ",".join(str(x) for x in v)
        lines.append(f"# {k}={v}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _check(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def cmd_rank(args) -> int:
    _check(args.k >= 0, "--k must be nonnegative")
    _check(args.top >= 0, "--top must be nonnegative")
    try:
        spec = MethodSpec(args.method, args.k, args.f, args.weights, args.cn_mode)
    except ValueError as e:
        raise UsageError(str(e)) from None
    graph = load_dataset(args.graph)
    scores = score_graph(graph, spec, threads=args.threads)
    ranking = rank_candidates(scores, nonadjacent_pair_array(graph))
    top = len(ranking) if args.top == 0 else min(args.top, len(ranking))
    labels = graph.node_labels
    lines = []
    for (u, v), s in zip(ranking.pairs[:top].tolist(), ranking.scores[:top].tolist()):
        a, b = sorted((labels[u], labels[v]))
        lines.append(f"{a},{b},{format_score(s)}")
    if 0 < top < len(ranking) and ranking.group[top - 1] == ranking.group[top]:
        g = ranking.group[top - 1]
        size = int((ranking.group == g).sum())
        shown = int((ranking.group[:top] == g).sum())
        lines.append(
            f"# tie at cutoff: {shown} of {size} pairs scoring {format_score(ranking.scores[top - 1])} shown; "
            f"each of the {size} is in the top {top} with probability {shown}/{size}"
        )
    _emit(_header(args, {"candidates": len(ranking)}) + "\n".join(lines) + ("\n" if lines else ""), args.out)
    return 0


def cmd_evaluate(args) -> int:
    _check(0 < args.fraction < 1, f"--fraction must lie in (0, 1), got {args.fraction}")
    _check(0 <= args.seed < 2**64, "--seed must be a 64-bit unsigned integer")
    try:
        methods = [MethodSpec(m, k, args.f, args.weights, args.cn_mode) for m in args.methods for k in args.k_list]
        config = ExperimentConfig(
            dataset=args.graph, methods=tuple(methods), fraction=args.fraction, trials=args.trials, seed=args.seed, workers=args.threads
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    graph = load_dataset(args.graph)
    report = run_experiment(config, graph)
    header = _header(args, {"dataset_checksum": report.metadata["dataset_checksum"]})
    footer = "".join(f"# mean_ball_size k={k}: {v:.5f}\n" for k, v in sorted(report.ball_size.items()))
    csv_text = header + report.to_csv() + footer
    if args.out:
        Path(args.out + ".csv").write_text(csv_text)
        Path(args.out + ".json").write_text(report.to_json())
    else:
        sys.stdout.write(csv_text)
    return 0


def cmd_generate(args) -> int:
    _check(1 <= args.m <= args.m0 <= args.n, "need 1 <= m <= m0 <= n")
    _check(0 <= args.seed < 2**64, "--seed must be a 64-bit unsigned integer")
    graph = generate_pa(args.n, args.m0, args.m, RandomSeed(args.seed))
    _emit(_header(args, {"edges": graph.edge_count}) + write_edge_list(graph), args.out)
    return 0


def cmd_bench(args) -> int:
    _check(all(1 <= args.m <= args.m0 <= n for n in args.sizes), "need 1 <= m <= m0 <= n for every size")
    _check(all(k >= 1 for k in args.k_list), "--k-list entries must be at least 1")
    try:
        rows = runtime_benchmark(args.sizes, args.m0, args.m, args.k_list, args.methods, args.repeats, args.seed, args.threads)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _emit(_header(args) + benchmark_csv(rows), args.out)
    return 0


def cmd_verify(args) -> int:
    from . import verify

    _check(2 <= args.max_n <= DEFAULT_ENUMERATION_BOUND, f"--max-n must lie in [2, {DEFAULT_ENUMERATION_BOUND}] (enumeration bound)")
    _check(all(k >= 1 for k in args.k_list), "--k-list entries must be at least 1")
    sys.stdout.write(_header(args))
    report = verify.oracle_sweep(max_n=args.max_n, k_list=args.k_list, threads=args.threads, stop_on_failure=True)
    print(report.summary())
    if not report.passed:
        print(f"first counterexample: {report.failures[0]}")
        return 2
    return 0


COMMANDS = {"rank": cmd_rank, "evaluate": cmd_evaluate, "generate": cmd_generate, "bench": cmd_bench, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"linkgame: error: {e}", file=sys.stderr)
        return 1
    except (EdgeListError, DatasetUnavailable, FileNotFoundError, IsADirectoryError, UnicodeDecodeError) as e:
        print(f"linkgame: data error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
