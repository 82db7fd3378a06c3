"""Comparison similarity measures: Shapley k-degree interaction, k-common
neighbours, and local/superposed random walks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._pairs import PairSums, group_blocks, group_pairs
from .functions import DistanceFunction
from .graph import Graph
from .kernels import shapley_closeness_all_pairs
from .neighborhood import NeighborhoodTable
from .scores import PairScores

CN_MODES = ("inclusive", "strict")


def shapley_k_degree_scores(table: NeighborhoodTable, threads: int = 1) -> PairScores:
    """The closeness kernel with the indicator distance function, which turns
    group closeness into the size of the group's k-neighbourhood."""
    return shapley_closeness_all_pairs(table, DistanceFunction("indicator", table.radius), threads=threads)


def common_neighbors_scores(table: NeighborhoodTable, k: float, mode: str = "inclusive") -> PairScores:
    """Number of nodes ``w`` (other than ``s`` and ``t``) within range ``k`` of
    both ``s`` and ``t``.

    ``mode="inclusive"`` counts ``dist <= k``; ``mode="strict"`` counts
    ``dist < k``, under which ``k = 1`` yields no common neighbours at all.
    Adjacent pairs are scored too. Only pairs with a nonzero count are stored.
    """
    if mode not in CN_MODES:
        raise ValueError(f"mode must be one of {CN_MODES}, got {mode!r}")
    k = float(k)
    if k > table.radius:
        raise ValueError(f"table radius {table.radius} is smaller than k = {k}")
    n = table.node_count
    flat = table.flat
    dist = flat.level_value[flat.entry_level]
    owner = np.repeat(np.arange(n), flat.entry_size)
    within = dist <= k if mode == "inclusive" else dist < k
    keep = within & (flat.entry_node != owner)

    members = flat.entry_node[keep]
    sizes = np.bincount(owner[keep], minlength=n)
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64)
    sums = PairSums(n, dense=n <= 3000)
    for block in group_blocks(sizes, range(n)):
        first, second = group_pairs(members, starts, sizes, block)
        sums.add(members[first] * n + members[second], np.ones(len(first)))
    keys, vals = sums.result()
    return PairScores.from_sorted_keys(n, keys, vals)


@dataclass(frozen=True)
class WalkProfile:
    """Distribution of a uniform random walk from ``source`` after ``step`` moves."""

    source: int
    step: int
    probabilities: np.ndarray


def transition_matrix(graph: Graph) -> sp.csr_matrix:
    """Row-stochastic uniform transitions (weights ignored); rows of isolated
    nodes are zero."""
    adj = graph.adjacency_matrix(weighted=False)
    deg = graph.degrees().astype(np.float64)
    inv = np.divide(1.0, deg, out=np.zeros_like(deg), where=deg > 0)
    return sp.csr_matrix(sp.diags(inv) @ adj)


def walk_matrices(graph: Graph, k: int) -> list[np.ndarray]:
    """``P(t)`` for ``t = 0..k`` as dense matrices (row = source), each obtained
    from the previous one by one sparse transition step. Rows of isolated
    sources are zero at every step."""
    _check_steps(k)
    T = transition_matrix(graph)
    start = np.eye(graph.n)
    start[graph.degrees() == 0] = 0.0
    out = [start]
    for _ in range(k):
        out.append(np.asarray((T.T @ out[-1].T).T))
    return out


def walk_profile(graph: Graph, source: int, step: int) -> WalkProfile:
    _check_steps(step)
    T = transition_matrix(graph)
    p = np.zeros(graph.n)
    if graph.degree(source) > 0:
        p[source] = 1.0
        for _ in range(step):
            p = T.T @ p
    return WalkProfile(source, step, p)


def _check_steps(k) -> None:
    if int(k) != k or k < 0:
        raise ValueError(f"number of steps must be a nonnegative integer, got {k}")


def _lrw_matrix(graph: Graph, P: np.ndarray) -> np.ndarray:
    m = graph.edge_count
    if m == 0:
        return np.zeros_like(P)
    M = graph.degrees()[:, None] / (2.0 * m) * P
    return M + M.T


def _nonadjacent_nonzero(graph: Graph, S: np.ndarray) -> PairScores:
    n = graph.n
    mask = np.triu(S != 0, k=1)
    for u, v, _ in graph.edges():
        mask[u, v] = False
    rows, cols = np.nonzero(mask)
    return PairScores.from_sorted_keys(n, rows * n + cols, S[rows, cols])


def lrw_scores(graph: Graph, k: int) -> PairScores:
    """Local random walk: ``deg(u)/(2|E|) P_uv(k) + deg(v)/(2|E|) P_vu(k)``,
    stored for non-adjacent pairs with a nonzero value."""
    P = walk_matrices(graph, k)[-1]
    return _nonadjacent_nonzero(graph, _lrw_matrix(graph, P))


def srw_scores(graph: Graph, k: int) -> PairScores:
    """Superposed random walk: the sum of local random walk scores over steps
    ``0..k``."""
    total = np.zeros((graph.n, graph.n))
    for P in walk_matrices(graph, k):
        total += _lrw_matrix(graph, P)
    return _nonadjacent_nonzero(graph, total)
