"""Edge-removal experiments: hide a fraction of edges, rank every non-adjacent
pair of the remaining graph, and score the ranking with AUC and precision at
depth = number of hidden edges."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .baselines import common_neighbors_scores, lrw_scores, shapley_k_degree_scores, srw_scores
from .functions import DistanceFunction, normalize_kind, weights_for
from .generators import generate_pa
from .graph import Graph, RandomSeed, nonadjacent_pair_array, remove_random_edges
from .kernels import semivalue_closeness_all_pairs, shapley_closeness_all_pairs
from .metrics import auc_from_values, expected_precision_from_values
from .neighborhood import NeighborhoodTable, build_neighborhood_table
from .scores import PairScores

METHODS = ("shapley-closeness", "semivalue-closeness", "shapley-degree", "cn", "lrw", "srw")
TABLE_METHODS = {"shapley-closeness", "semivalue-closeness", "shapley-degree", "cn"}


def normalize_method(name: str) -> str:
    key = name.strip().lower().replace("_", "-")
    aliases = {"shp-cls": "shapley-closeness", "shp-deg": "shapley-degree", "k-degree": "shapley-degree"}
    key = aliases.get(key, key)
    if key not in METHODS:
        raise ValueError(f"unknown method {name!r}; choose from {', '.join(METHODS)}")
    return key


@dataclass(frozen=True)
class MethodSpec:
    kind: str
    k: int
    f: str = "inverse_square"
    weights: str = "shapley"
    cn_mode: str = "inclusive"

    def __post_init__(self):
        object.__setattr__(self, "kind", normalize_method(self.kind))
        object.__setattr__(self, "f", normalize_kind(self.f))
        if int(self.k) != self.k or self.k < 0:
            raise ValueError(f"k must be a nonnegative integer, got {self.k}")
        if self.k == 0 and self.kind in TABLE_METHODS:
            raise ValueError(f"{self.kind} needs k >= 1")
        object.__setattr__(self, "k", int(self.k))

    @property
    def name(self) -> str:
        """Method name with its non-radius parameters, e.g. ``shapley-closeness(inverse_square)``."""
        if self.kind == "shapley-closeness":
            return f"{self.kind}({self.f})"
        if self.kind == "semivalue-closeness":
            return f"{self.kind}({self.f},{self.weights})"
        if self.kind == "cn":
            return f"cn({self.cn_mode})"
        return self.kind


def score_graph(graph: Graph, method: MethodSpec, table: NeighborhoodTable | None = None, threads: int = 1) -> PairScores:
    """Scores of ``method`` on ``graph``; ``table`` (radius ``method.k``) is
    built if not supplied."""
    if method.kind in TABLE_METHODS:
        if table is None:
            table = build_neighborhood_table(graph, method.k)
        if table.radius != method.k:
            raise ValueError("table radius must equal the method's k")
    if method.kind == "shapley-closeness":
        return shapley_closeness_all_pairs(table, DistanceFunction(method.f, method.k), threads=threads)
    if method.kind == "semivalue-closeness":
        w = weights_for(method.weights, graph.n)
        return semivalue_closeness_all_pairs(table, DistanceFunction(method.f, method.k), w, threads=threads)
    if method.kind == "shapley-degree":
        return shapley_k_degree_scores(table, threads=threads)
    if method.kind == "cn":
        return common_neighbors_scores(table, method.k, mode=method.cn_mode)
    if method.kind == "lrw":
        return lrw_scores(graph, method.k)
    return srw_scores(graph, method.k)


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str
    methods: tuple[MethodSpec, ...]
    fraction: float = 0.30
    trials: int = 1000
    seed: int = 0
    threads: int = 1
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.methods:
            raise ValueError("at least one method is required")
        if not 0 < self.fraction < 1:
            raise ValueError("fraction must lie in (0, 1)")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.threads < 1 or self.workers < 1:
            raise ValueError("threads and workers must be at least 1")
        RandomSeed(self.seed)

    def radii(self) -> list[int]:
        return sorted({m.k for m in self.methods if m.kind in TABLE_METHODS})

    def as_dict(self) -> dict:
        d = asdict(self)
        d["methods"] = [asdict(m) for m in self.methods]
        return d


@dataclass
class TrialOutcome:
    trial: int
    missing: int
    candidates: int
    auc: dict[tuple[str, int], float]
    precision: dict[tuple[str, int], float]
    ball_size: dict[int, float] = field(default_factory=dict)


ExtraScorer = Callable[[Graph, set, int], PairScores]


def run_trial(
    graph: Graph,
    config: ExperimentConfig,
    trial_index: int,
    extra: dict[str, tuple[int, ExtraScorer]] | None = None,
) -> TrialOutcome:
    """One removal trial. ``extra`` maps labels to ``(k, scorer)`` where
    ``scorer(observed, missing, k)`` returns scores; it exists for tests."""
    seed = RandomSeed(config.seed, trial_index)
    observed, missing = remove_random_edges(graph, config.fraction, seed)
    cand = nonadjacent_pair_array(observed)
    n = graph.n
    keys = cand[:, 0] * n + cand[:, 1]
    positive = np.isin(keys, np.array([u * n + v for u, v in missing], dtype=np.int64))
    p = len(missing)

    tables: dict[int, NeighborhoodTable] = {}
    radii = config.radii()
    if radii:
        widest = build_neighborhood_table(observed, radii[-1])
        for k in radii:
            tables[k] = widest if k == radii[-1] else widest.restrict(k)

    aucs, precs = {}, {}

    def record(label: str, k: int, scores: PairScores) -> None:
        values = scores.lookup(cand)
        aucs[(label, k)] = auc_from_values(values, positive)
        precs[(label, k)] = expected_precision_from_values(values, positive, p)

    for m in config.methods:
        record(m.name, m.k, score_graph(observed, m, tables.get(m.k), threads=config.threads))
    for label, (k, scorer) in (extra or {}).items():
        record(label, k, scorer(observed, missing, k))
    return TrialOutcome(
        trial=trial_index,
        missing=p,
        candidates=len(cand),
        auc=aucs,
        precision=precs,
        ball_size={k: t.mean_ball_size() for k, t in tables.items()},
    )


@dataclass
class ReportRow:
    method: str
    k: int
    metric: str
    mean: float
    stddev: float
    trials: int


@dataclass
class ExperimentReport:
    """Means and standard deviations (sample, ``ddof=1``) in percent."""

    config: dict
    metadata: dict
    rows: list[ReportRow]
    ball_size: dict[int, float]
    outcomes: list[TrialOutcome] = field(default_factory=list, repr=False)

    def value(self, method: str, k: int, metric: str = "auc") -> float:
        for r in self.rows:
            if r.method == method and r.k == k and r.metric == metric:
                return r.mean
        raise KeyError((method, k, metric))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["method", "k", "metric", "mean", "stddev", "trials"])
        for r in self.rows:
            w.writerow([r.method, r.k, r.metric, f"{r.mean:.3f}", f"{r.stddev:.3f}", r.trials])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "config": self.config,
            "metadata": self.metadata,
            "results": [asdict(r) for r in self.rows],
            "mean_ball_size": {str(k): v for k, v in sorted(self.ball_size.items())},
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _mean_std(values: Sequence[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    return float(arr.mean()), float(arr.std(ddof=1)) if len(arr) > 1 else 0.0


def _trial_worker(args):
    graph, config, index = args
    return run_trial(graph, config, index)


def aggregate(config: ExperimentConfig, outcomes: list[TrialOutcome], metadata: dict) -> ExperimentReport:
    outcomes = sorted(outcomes, key=lambda o: o.trial)
    rows = []
    for key in outcomes[0].auc:
        label, k = key
        for metric, attr in (("auc", "auc"), ("precision", "precision")):
            mean, std = _mean_std([100.0 * getattr(o, attr)[key] for o in outcomes])
            rows.append(ReportRow(label, k, metric, mean, std, len(outcomes)))
    ball = {k: float(np.mean([o.ball_size[k] for o in outcomes])) for k in outcomes[0].ball_size}
    return ExperimentReport(config.as_dict(), metadata, rows, ball, outcomes)


def run_experiment(
    config: ExperimentConfig,
    graph: Graph | None = None,
    progress: Callable[[int], None] | None = None,
) -> ExperimentReport:
    """All trials of ``config``; with ``workers > 1`` trials run in separate
    processes, and results are still combined in trial order."""
    from .datasets import load_dataset

    if graph is None:
        graph = load_dataset(config.dataset)
    indices = range(config.trials)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_trial_worker, [(graph, config, i) for i in indices], chunksize=8))
    else:
        outcomes = []
        for i in indices:
            outcomes.append(run_trial(graph, config, i))
            if progress:
                progress(i)
    metadata = {
        "seed": config.seed,
        "version": __version__,
        "dataset_checksum": graph.checksum(),
        "nodes": graph.n,
        "edges": graph.edge_count,
    }
    return aggregate(config, outcomes, metadata)


@dataclass
class BenchmarkRow:
    n: int
    k: int
    method: str
    mean_ms: float
    mean_ball_size: float
    repeats: int


def runtime_benchmark(
    sizes: Iterable[int],
    m0: int,
    m: int,
    k_list: Iterable[int],
    methods: Iterable[str],
    repeats: int,
    seed: int = 0,
    threads: int = 1,
) -> list[BenchmarkRow]:
    """Mean wall time (table construction plus scoring) per ``(n, k, method)``
    over ``repeats`` fresh PA graphs, with the measured mean ball size."""
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    sizes, k_list = list(sizes), list(k_list)
    methods = [normalize_method(x) for x in methods]
    rows = []
    for n in sizes:
        graphs = [generate_pa(n, m0, m, RandomSeed(seed, r)) for r in range(repeats)]
        for k in k_list:
            balls = []
            times = {meth: [] for meth in methods}
            for g in graphs:
                for meth in methods:
                    spec = MethodSpec(meth, k)
                    t0 = time.perf_counter()
                    table = build_neighborhood_table(g, k) if meth in TABLE_METHODS else None
                    score_graph(g, spec, table, threads=threads)
                    times[meth].append(time.perf_counter() - t0)
                balls.append(build_neighborhood_table(g, k).mean_ball_size())
            for meth in methods:
                rows.append(BenchmarkRow(n, k, meth, 1000.0 * float(np.mean(times[meth])), float(np.mean(balls)), repeats))
    return rows


def benchmark_csv(rows: list[BenchmarkRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "k", "method", "mean_ms", "mean_ball_size", "repeats"])
    for r in rows:
        w.writerow([r.n, r.k, r.method, f"{r.mean_ms:.3f}", f"{r.mean_ball_size:.4f}", r.repeats])
    return buf.getvalue()
