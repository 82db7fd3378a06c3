"""Bounded-radius shortest paths and per-node cumulative distance counts.

For every node ``u`` the table keeps the nodes within distance ``k`` of ``u``
(``u`` itself included at distance 0), sorted by distance descending, and for
each distinct distance ``d`` in that list the counts

    nod_lt(u, d)  = |{v : dist(u, v) <  d}|
    nod_leq(u, d) = |{v : dist(u, v) <= d}|
    nod_gt(u, d)  = |V| - nod_leq(u, d)
    nod_geq(u, d) = |V| - nod_lt(u, d)

over the whole node set (nodes beyond the radius count as farther than any
listed distance).
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class BoundedDistanceList:
    source: int
    nodes: np.ndarray      # int64, sorted by (distance desc, node id desc)
    distances: np.ndarray  # float64, nonincreasing

    def __len__(self) -> int:
        return len(self.nodes)

    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.nodes.tolist(), self.distances.tolist()))

    def as_dict(self) -> dict[int, float]:
        return dict(self.entries())


def _check_radius(k: float) -> float:
    k = float(k)
    if not k > 0:
        raise ValueError(f"radius must be positive, got {k}")
    return k


def _sorted_list(source: int, dist: dict[int, float]) -> BoundedDistanceList:
    items = sorted(dist.items(), key=lambda kv: (kv[1], kv[0]), reverse=True)
    nodes = np.fromiter((v for v, _ in items), dtype=np.int64, count=len(items))
    dists = np.fromiter((d for _, d in items), dtype=np.float64, count=len(items))
    return BoundedDistanceList(source, nodes, dists)


def bounded_sssp(graph: Graph, source: int, k: float) -> BoundedDistanceList:
    """Dijkstra from ``source`` that never enqueues a node whose tentative
    distance exceeds ``k``. Queue ties resolve by node id."""
    k = _check_radius(k)
    if not 0 <= source < graph.n:
        raise IndexError(f"source {source} out of range")
    if graph.unit_weights:
        return _sorted_list(source, _bounded_bfs(graph, source, k))

    dist = {source: 0.0}
    done: set[int] = set()
    heap = [(0.0, source)]
    adjacency = graph.adjacency
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adjacency[u]:
            nd = d + w
            if nd <= k and nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return _sorted_list(source, dist)


def _bounded_bfs(graph: Graph, source: int, k: float) -> dict[int, float]:
    # unit weights: hop counts, identical to the heap version
    hops = int(math.floor(k))
    dist = {source: 0}
    frontier = deque([source])
    adjacency = graph.adjacency
    while frontier:
        u = frontier.popleft()
        du = dist[u]
        if du == hops:
            continue
        for v, _ in adjacency[u]:
            if v not in dist:
                dist[v] = du + 1
                frontier.append(v)
    return {v: float(d) for v, d in dist.items()}


@dataclass(frozen=True)
class NodeCounts:
    """Distinct distances of one node's list, ascending, with cumulative counts."""

    levels: np.ndarray   # distinct distances, ascending (levels[0] == 0)
    nod_lt: np.ndarray
    nod_leq: np.ndarray
    level_of: np.ndarray  # per list entry: index into ``levels``


@dataclass(frozen=True)
class FlatLayout:
    """Every list and every level of a table concatenated in node order, for
    kernels that process all nodes with whole-array operations."""

    entry_node: np.ndarray    # ball members, list order within each owner
    entry_level: np.ndarray   # global level index of each entry
    entry_start: np.ndarray   # per owner: offset of its first entry
    entry_size: np.ndarray    # per owner: list length
    level_owner: np.ndarray
    level_local: np.ndarray   # 0 for distance 0, ascending within an owner
    level_value: np.ndarray
    nod_lt: np.ndarray
    nod_leq: np.ndarray
    level_start: np.ndarray   # per owner: offset of its first level


class NeighborhoodTable:
    """All bounded distance lists of a graph for one radius."""

    def __init__(self, graph: Graph, radius: float, lists: list[BoundedDistanceList]):
        self.graph = graph
        self.radius = float(radius)
        self.lists = lists
        self.node_count = graph.n
        self.counts = [self._counts(lst) for lst in lists]

    def _counts(self, lst: BoundedDistanceList) -> NodeCounts:
        # descending scan, as in the kernels' preamble: everything outside the
        # list is farther than the largest listed distance
        n = self.node_count
        levels_desc: list[float] = []
        nod_gt_desc: list[int] = []
        nod_geq_desc: list[int] = []
        level_idx_desc = np.empty(len(lst), dtype=np.int64)
        geq = n - len(lst)
        prev = None
        for i, d in enumerate(lst.distances.tolist()):
            if d != prev:
                levels_desc.append(d)
                nod_gt_desc.append(geq)
                nod_geq_desc.append(geq)
                prev = d
            geq += 1
            nod_geq_desc[-1] = geq
            level_idx_desc[i] = len(levels_desc) - 1
        levels = np.array(levels_desc[::-1], dtype=np.float64)
        nod_gt = np.array(nod_gt_desc[::-1], dtype=np.int64)
        nod_geq = np.array(nod_geq_desc[::-1], dtype=np.int64)
        level_of = (len(levels_desc) - 1) - level_idx_desc
        return NodeCounts(levels, n - nod_geq, n - nod_gt, level_of)

    @cached_property
    def flat(self) -> FlatLayout:
        n = self.node_count
        sizes = self.list_sizes()
        nlev = np.array([len(c.levels) for c in self.counts], dtype=np.int64)
        level_start = np.concatenate([[0], np.cumsum(nlev)[:-1]]).astype(np.int64)

        def cat(parts, dtype):
            return np.concatenate(parts).astype(dtype) if n else np.zeros(0, dtype)

        return FlatLayout(
            entry_node=cat([lst.nodes for lst in self.lists], np.int64),
            entry_level=cat([c.level_of + level_start[u] for u, c in enumerate(self.counts)], np.int64),
            entry_start=np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64),
            entry_size=sizes,
            level_owner=np.repeat(np.arange(n, dtype=np.int64), nlev),
            level_local=cat([np.arange(k) for k in nlev], np.int64),
            level_value=cat([c.levels for c in self.counts], np.float64),
            nod_lt=cat([c.nod_lt for c in self.counts], np.int64),
            nod_leq=cat([c.nod_leq for c in self.counts], np.int64),
            level_start=level_start,
        )

    def _level(self, u: int, d: float) -> int:
        c = self.counts[u]
        i = int(np.searchsorted(c.levels, d))
        if i >= len(c.levels) or c.levels[i] != d:
            raise KeyError(f"distance {d} does not occur in the list of node {u}")
        return i

    def nod_leq(self, u: int, d: float) -> int:
        return int(self.counts[u].nod_leq[self._level(u, d)])

    def nod_lt(self, u: int, d: float) -> int:
        return int(self.counts[u].nod_lt[self._level(u, d)])

    def nod_gt(self, u: int, d: float) -> int:
        return self.node_count - self.nod_leq(u, d)

    def nod_geq(self, u: int, d: float) -> int:
        return self.node_count - self.nod_lt(u, d)

    def distances(self, u: int) -> list[float]:
        return self.counts[u].levels.tolist()

    def list_sizes(self) -> np.ndarray:
        return np.array([len(lst) for lst in self.lists], dtype=np.int64)

    def mean_ball_size(self) -> float:
        """Average list length, source included (the V_k statistic)."""
        return float(self.list_sizes().mean()) if self.node_count else 0.0

    def restrict(self, radius: float) -> "NeighborhoodTable":
        """Table for a smaller radius, by truncating the lists (distances within
        the smaller radius are unaffected by the larger bound)."""
        radius = _check_radius(radius)
        if radius > self.radius:
            raise ValueError("can only restrict to a smaller radius")
        lists = []
        for lst in self.lists:
            keep = lst.distances <= radius
            lists.append(BoundedDistanceList(lst.source, lst.nodes[keep], lst.distances[keep]))
        return NeighborhoodTable(self.graph, radius, lists)


def build_neighborhood_table(graph: Graph, k: float) -> NeighborhoodTable:
    k = _check_radius(k)
    return NeighborhoodTable(graph, k, [bounded_sssp(graph, u, k) for u in range(graph.n)])
