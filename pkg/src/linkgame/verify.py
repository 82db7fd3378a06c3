"""Exhaustive comparison of the counting kernels against enumeration oracles on
every connected graph up to a given size."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import networkx as nx
import numpy as np

from .baselines import shapley_k_degree_scores
from .enumeration import connected_graphs
from .functions import KINDS, DistanceFunction, SemivalueWeights, banzhaf_weights, shapley_weights
from .games import (
    DEFAULT_ENUMERATION_BOUND,
    EnumerationBoundError,
    all_pairs_distances,
    closeness_table,
    coalition_interaction_matrix,
    k_degree_table,
    permutation_interaction_matrix,
)
from .graph import Graph
from .kernels import semivalue_closeness_all_pairs, shapley_closeness_all_pairs
from .neighborhood import build_neighborhood_table
from .scores import PairScores

FAMILIES = ("shapley", "semivalue-shapley", "semivalue-banzhaf", "k-degree")

# kernel(table, f, weights, threads) -> scores
Kernel = Callable[..., PairScores]


def _shapley_kernel(table, f, weights, threads=1):
    return shapley_closeness_all_pairs(table, f, threads=threads)


def _semivalue_kernel(table, f, weights, threads=1):
    return semivalue_closeness_all_pairs(table, f, weights, threads=threads)


def _k_degree_kernel(table, f, weights, threads=1):
    return shapley_k_degree_scores(table, threads=threads)


DEFAULT_KERNELS: dict[str, Kernel] = {
    "shapley": _shapley_kernel,
    "semivalue-shapley": _semivalue_kernel,
    "semivalue-banzhaf": _semivalue_kernel,
    "k-degree": _k_degree_kernel,
}


@dataclass
class Counterexample:
    graph6: str
    family: str
    kind: str
    k: int
    pair: tuple[int, int]
    kernel: float
    expected: float

    def __str__(self) -> str:
        return (
            f"graph6={self.graph6} family={self.family} f={self.kind} k={self.k} "
            f"pair={self.pair}: kernel {self.kernel!r} != expected {self.expected!r}"
        )


@dataclass
class SweepReport:
    graphs: int = 0
    comparisons: int = 0
    max_error: float = 0.0
    max_thread_diff: float = 0.0
    failures: list[Counterexample] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}: {self.graphs} graphs, {self.comparisons} pair comparisons, "
            f"max error {self.max_error:.3g}, max thread difference {self.max_thread_diff:.3g}, "
            f"{self.elapsed:.1f}s"
        )


def _graph6(g: Graph) -> str:
    return nx.to_graph6_bytes(g.to_networkx(), header=False).decode().strip()


def check_graph(
    graph: Graph,
    report: SweepReport,
    k_list: Sequence[int] = (1, 2, 3),
    kinds: Sequence[str] = KINDS,
    families: Sequence[str] = FAMILIES,
    tol: float = 1e-9,
    threads: int = 1,
    kernels: dict[str, Kernel] | None = None,
    weights: dict[str, SemivalueWeights] | None = None,
) -> None:
    """Compare every pair of one graph; append any mismatch to ``report``."""
    kernels = {**DEFAULT_KERNELS, **(kernels or {})}
    n = graph.n
    if n > DEFAULT_ENUMERATION_BOUND:
        raise EnumerationBoundError(f"{n} nodes exceeds the enumeration bound of {DEFAULT_ENUMERATION_BOUND}")
    if n < 2:
        return
    if weights is None:
        weights = {"shapley": shapley_weights(n), "banzhaf": banzhaf_weights(n)}
    dist = all_pairs_distances(graph)
    iu, ju = np.triu_indices(n, k=1)
    label = None

    def compare(family, kind, k, scores: PairScores, index: np.ndarray, w):
        nonlocal label
        got = scores.to_dense()[iu, ju]
        want = -index[iu, ju]
        err = np.abs(got - want)
        report.comparisons += len(err)
        report.max_error = max(report.max_error, float(err.max()))
        bad = np.flatnonzero(~(err <= tol))
        if len(bad):
            label = label or _graph6(graph)
            i = bad[0]
            report.failures.append(
                Counterexample(label, family, kind, k, (int(iu[i]), int(ju[i])), float(got[i]), float(want[i]))
            )
        if threads > 1:
            parallel = kernels[family](table, DistanceFunction(kind, k), w, threads=threads).to_dense()[iu, ju]
            report.max_thread_diff = max(report.max_thread_diff, float(np.abs(parallel - got).max()))
            if np.any(~(np.abs(parallel - got) <= tol)):
                label = label or _graph6(graph)
                report.failures.append(Counterexample(label, family + f"@threads={threads}", kind, k, (-1, -1), float("nan"), float("nan")))

    for k in k_list:
        table = build_neighborhood_table(graph, k)
        for kind in kinds:
            f = DistanceFunction(kind, k)
            values = closeness_table(dist, f)
            if "shapley" in families:
                compare("shapley", kind, k, kernels["shapley"](table, f, None), permutation_interaction_matrix(values, n), None)
            for fam in ("semivalue-shapley", "semivalue-banzhaf"):
                if fam in families:
                    w = weights[fam.split("-")[1]]
                    compare(fam, kind, k, kernels[fam](table, f, w), coalition_interaction_matrix(values, n, w), w)
        if "k-degree" in families:
            index = permutation_interaction_matrix(k_degree_table(dist, k), n)
            compare("k-degree", "indicator", k, kernels["k-degree"](table, None, None), index, None)
    report.graphs += 1


def oracle_sweep(
    max_n: int = 6,
    k_list: Sequence[int] = (1, 2, 3),
    kinds: Sequence[str] = KINDS,
    families: Sequence[str] = FAMILIES,
    tol: float = 1e-9,
    threads: int = 1,
    min_n: int = 2,
    kernels: dict[str, Kernel] | None = None,
    stop_on_failure: bool = False,
    graphs: Iterable[Graph] | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> SweepReport:
    """Run the comparison on every connected graph with ``min_n..max_n`` nodes
    (or on the given ``graphs``)."""
    if max_n > DEFAULT_ENUMERATION_BOUND:
        raise EnumerationBoundError(f"max_n={max_n} exceeds the enumeration bound of {DEFAULT_ENUMERATION_BOUND}")
    unknown = set(families) - set(FAMILIES)
    if unknown:
        raise ValueError(f"unknown families {sorted(unknown)}")
    report = SweepReport()
    start = time.perf_counter()

    def all_graphs():
        if graphs is not None:
            yield from graphs
            return
        for n in range(max(min_n, 2), max_n + 1):
            for g in connected_graphs(n):
                yield Graph.from_networkx(g)

    weight_cache: dict[int, dict[str, SemivalueWeights]] = {}
    for g in all_graphs():
        if g.n not in weight_cache and g.n >= 2:
            weight_cache[g.n] = {"shapley": shapley_weights(g.n), "banzhaf": banzhaf_weights(g.n)}
        check_graph(g, report, k_list, kinds, families, tol, threads, kernels, weight_cache.get(g.n))
        if progress:
            progress(report.graphs, g.n)
        if stop_on_failure and report.failures:
            break
    report.elapsed = time.perf_counter() - start
    return report
