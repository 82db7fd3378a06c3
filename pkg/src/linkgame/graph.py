"""Undirected weighted graphs with dense integer node ids, plus edge-list I/O.

Nodes carry arbitrary string labels and are numbered ``0..n-1`` in order of
first appearance. Graphs are immutable once built.
"""

from __future__ import annotations

import hashlib
import io
import logging
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, Iterator, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


class EdgeListError(ValueError):
    """Raised for malformed edge-list input; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def pair(u: int, v: int) -> Pair:
    """Canonical (min, max) form of an unordered node pair."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class RandomSeed:
    """A reproducible random stream: ``stream_index`` selects an independent
    substream of ``master_seed`` via numpy's ``SeedSequence`` spawn keys."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.stream_index < 0:
            raise ValueError("stream_index must be nonnegative")

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(entropy=self.master_seed, spawn_key=(self.stream_index,))

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed_sequence()))

    def stream(self, index: int) -> "RandomSeed":
        return RandomSeed(self.master_seed, index)


@dataclass(frozen=True, eq=False)
class Graph:
    node_labels: tuple[str, ...]
    adjacency: tuple[tuple[tuple[int, float], ...], ...]
    edge_count: int
    duplicates_dropped: int = field(default=0, compare=False)

    @classmethod
    def from_edges(
        cls,
        labels: Sequence[str],
        edges: Iterable[tuple[int, int] | tuple[int, int, float]],
    ) -> "Graph":
        """Build from integer edges. Self-loops, duplicates and non-positive
        weights raise ``ValueError``."""
        n = len(labels)
        adj: list[dict[int, float]] = [{} for _ in range(n)]
        m = 0
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references an unknown node")
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not w > 0 or math.isinf(w):
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {w}")
            if v in adj[u]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            adj[u][v] = w
            adj[v][u] = w
            m += 1
        return cls(
            node_labels=tuple(str(x) for x in labels),
            adjacency=tuple(tuple(sorted(a.items())) for a in adj),
            edge_count=m,
        )

    @classmethod
    def from_networkx(cls, g) -> "Graph":
        nodes = list(g.nodes())
        index = {x: i for i, x in enumerate(nodes)}
        edges = [(index[u], index[v], d.get("weight", 1.0)) for u, v, d in g.edges(data=True)]
        return cls.from_edges([str(x) for x in nodes], edges)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_weighted_edges_from(self.edges())
        return g

    @property
    def n(self) -> int:
        return len(self.node_labels)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"

    def neighbors(self, u: int) -> list[int]:
        return [v for v, _ in self.adjacency[u]]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        return any(x == v for x, _ in self.adjacency[u])

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Each undirected edge once, as ``(u, v, w)`` with ``u < v``, ascending."""
        for u, nbrs in enumerate(self.adjacency):
            for v, w in nbrs:
                if u < v:
                    yield u, v, w

    def edge_pairs(self) -> list[Pair]:
        return [(u, v) for u, v, _ in self.edges()]

    @cached_property
    def unit_weights(self) -> bool:
        return all(w == 1.0 for nbrs in self.adjacency for _, w in nbrs)

    def index(self, label: str) -> int:
        try:
            return self.node_labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def adjacency_matrix(self, weighted: bool = False):
        """Symmetric scipy CSR adjacency (unit entries unless ``weighted``)."""
        import scipy.sparse as sp

        rows, cols, vals = [], [], []
        for u, nbrs in enumerate(self.adjacency):
            for v, w in nbrs:
                rows.append(u)
                cols.append(v)
                vals.append(w if weighted else 1.0)
        return sp.csr_matrix((vals, (rows, cols)), shape=(self.n, self.n))

    def without_edges(self, removed: Iterable[Pair]) -> "Graph":
        """Same node set, with the given undirected edges deleted."""
        drop = {pair(u, v) for u, v in removed}
        kept = [(u, v, w) for u, v, w in self.edges() if (u, v) not in drop]
        if len(kept) != self.edge_count - len(drop):
            raise ValueError("some edges to remove are not in the graph")
        return Graph.from_edges(self.node_labels, kept)

    def checksum(self) -> str:
        """sha256 of the canonical edge-list serialisation."""
        return hashlib.sha256(write_edge_list(self).encode()).hexdigest()


def _as_text(source: Union[bytes, str, IO]) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def load_edge_list(source: Union[bytes, str, IO], weighted: bool = False) -> Graph:
    """Parse whitespace-separated ``u v [w]`` lines.

    ``#`` starts a comment anywhere on a line; lines starting with ``%``
    (KONECT headers) are skipped too. Duplicate edges, including reversed
    duplicates, are dropped and counted in ``Graph.duplicates_dropped``.
    Without ``weighted`` any third column is validated and then ignored.
    """
    labels: list[str] = []
    index: dict[str, int] = {}
    edges: dict[Pair, float] = {}
    duplicates = 0

    def node(tok: str) -> int:
        i = index.get(tok)
        if i is None:
            i = index[tok] = len(labels)
            labels.append(tok)
        return i

    for lineno, raw in enumerate(io.StringIO(_as_text(source)), start=1):
        if raw.lstrip().startswith("%"):
            continue
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        if len(toks) not in (2, 3):
            raise EdgeListError(f"expected 'u v' or 'u v w', got {len(toks)} tokens", lineno)
        if toks[0] == toks[1]:
            raise EdgeListError(f"self-loop on {toks[0]!r}", lineno)
        w = 1.0
        if len(toks) == 3:
            try:
                w = float(toks[2])
            except ValueError:
                raise EdgeListError(f"weight {toks[2]!r} is not a number", lineno) from None
            if not w > 0 or math.isinf(w):
                raise EdgeListError(f"weight must be positive and finite, got {toks[2]}", lineno)
        u, v = node(toks[0]), node(toks[1])
        key = pair(u, v)
        if key in edges:
            duplicates += 1
            continue
        edges[key] = w if weighted else 1.0

    if duplicates:
        logger.warning("dropped %d duplicate edge(s)", duplicates)
    g = Graph.from_edges(labels, [(u, v, w) for (u, v), w in edges.items()])
    object.__setattr__(g, "duplicates_dropped", duplicates)
    return g


def read_edge_list(path: Union[str, os.PathLike], weighted: bool = False) -> Graph:
    with open(path, "rb") as fh:
        return load_edge_list(fh, weighted=weighted)


def write_edge_list(graph: Graph) -> str:
    """One edge per line in ascending ``(id, id)`` order; weights are written
    only when some weight differs from 1."""
    weighted = not graph.unit_weights
    lab = graph.node_labels
    lines = []
    for u, v, w in graph.edges():
        lines.append(f"{lab[u]} {lab[v]} {w:.17g}" if weighted else f"{lab[u]} {lab[v]}")
    return "\n".join(lines) + ("\n" if lines else "")


def nonadjacent_pairs(graph: Graph) -> Iterator[Pair]:
    """Every unordered pair ``u < v`` with no edge between them."""
    for u in range(graph.n):
        nbrs = {v for v, _ in graph.adjacency[u]}
        for v in range(u + 1, graph.n):
            if v not in nbrs:
                yield (u, v)


def nonadjacent_pair_array(graph: Graph) -> np.ndarray:
    """Vectorised ``nonadjacent_pairs``: an ``(N, 2)`` int array, rows ascending."""
    n = graph.n
    adj = np.zeros((n, n), dtype=bool)
    for u, v, _ in graph.edges():
        adj[u, v] = True
    iu, ju = np.triu_indices(n, k=1)
    keep = ~adj[iu, ju]
    return np.stack([iu[keep], ju[keep]], axis=1)


def removal_count(edge_count: int, fraction: float) -> int:
    """Half-up rounding of ``fraction * edge_count``."""
    return int(math.floor(fraction * edge_count + 0.5))


def remove_random_edges(graph: Graph, fraction: float, seed: RandomSeed) -> tuple[Graph, set[Pair]]:
    """Delete ``round(fraction * m)`` edges sampled uniformly without replacement.

    Returns ``(observed, missing)``; no connectivity repair is attempted.
    """
    if graph.edge_count == 0:
        raise ValueError("cannot remove edges from an empty graph")
    if not 0 < fraction < 1:
        raise ValueError("fraction must lie in (0, 1)")
    if fraction * graph.edge_count < 1:
        raise ValueError("fraction * edge_count must be at least 1")
    edges = graph.edge_pairs()
    k = removal_count(graph.edge_count, fraction)
    picked = seed.rng().choice(len(edges), size=k, replace=False)
    missing = {edges[i] for i in picked}
    return graph.without_edges(missing), missing
