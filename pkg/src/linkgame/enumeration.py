"""Exhaustive catalogue of small connected graphs, up to isomorphism.

Graphs on n nodes are grown from the connected graphs on n - 1 nodes by adding
one vertex joined to every nonempty subset of the old vertices. Every connected
graph has a non-cut vertex (a leaf of any spanning tree), so this reaches every
isomorphism class. Duplicates are removed with a Weisfeiler-Lehman hash bucket
followed by an exact isomorphism test.

The catalogue for n <= 8 ships as ``data/connected_graphs.g6``; larger orders
are generated on demand.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from importlib import resources
from typing import Iterator

import networkx as nx

# OEIS A001349
CONNECTED_GRAPH_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117, 9: 261080}

_BUNDLED_MAX_N = 8


def _canonical_bucket_key(g: nx.Graph) -> tuple:
    degrees = tuple(sorted(d for _, d in g.degree()))
    return degrees, nx.weisfeiler_lehman_graph_hash(g, iterations=3)


def _grow(graphs: list[nx.Graph], n: int) -> list[nx.Graph]:
    buckets: dict[tuple, list[nx.Graph]] = {}
    out: list[nx.Graph] = []
    old = list(range(n - 1))
    for base in graphs:
        for r in range(1, n):
            for nbrs in itertools.combinations(old, r):
                g = base.copy()
                g.add_node(n - 1)
                g.add_edges_from((n - 1, v) for v in nbrs)
                key = _canonical_bucket_key(g)
                bucket = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(g, h) for h in bucket):
                    continue
                bucket.append(g)
                out.append(g)
    return out


def generate_connected_graphs(n: int) -> list[nx.Graph]:
    """Generate every connected graph on ``n`` nodes (labels ``0..n-1``) from scratch."""
    if n < 1:
        raise ValueError("n must be positive")
    level = [nx.empty_graph(1)]
    for order in range(2, n + 1):
        level = _grow(level, order)
    return level


@lru_cache(maxsize=None)
def _bundled() -> dict[int, tuple[str, ...]]:
    text = resources.files("linkgame.data").joinpath("connected_graphs.g6").read_text()
    by_n: dict[int, list[str]] = {}
    for line in text.split():
        g = nx.from_graph6_bytes(line.encode())
        by_n.setdefault(g.number_of_nodes(), []).append(line)
    return {n: tuple(v) for n, v in by_n.items()}


def connected_graphs(n: int) -> Iterator[nx.Graph]:
    """Yield all connected graphs with exactly ``n`` nodes, one per isomorphism class."""
    if n <= _BUNDLED_MAX_N:
        for line in _bundled()[n]:
            yield nx.from_graph6_bytes(line.encode())
    else:
        yield from generate_connected_graphs(n)


def connected_graphs_up_to(max_n: int, min_n: int = 2) -> Iterator[nx.Graph]:
    for n in range(min_n, max_n + 1):
        yield from connected_graphs(n)


def write_catalogue(path, max_n: int = _BUNDLED_MAX_N) -> None:
    lines = []
    level = [nx.empty_graph(1)]
    lines.append(nx.to_graph6_bytes(level[0], header=False).decode().strip())
    for order in range(2, max_n + 1):
        level = _grow(level, order)
        lines.extend(nx.to_graph6_bytes(g, header=False).decode().strip() for g in level)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
