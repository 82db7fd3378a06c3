"""Preferential-attachment random graphs."""

from __future__ import annotations

import numpy as np

from .graph import Graph, RandomSeed


def generate_pa(n: int, m0: int, m: int, seed: RandomSeed) -> Graph:
    """Grow a graph from a clique on ``m0`` nodes; every later node links to
    ``m`` distinct existing nodes picked with probability proportional to their
    current degree. The result has ``m0 (m0 - 1) / 2 + (n - m0) m`` edges.

    Nodes are labelled ``"0" .. str(n - 1)`` in order of arrival.
    """
    if not (isinstance(n, (int, np.integer)) and isinstance(m0, (int, np.integer)) and isinstance(m, (int, np.integer))):
        raise TypeError("n, m0 and m must be integers")
    if not 1 <= m <= m0 <= n:
        raise ValueError(f"need 1 <= m <= m0 <= n, got n={n}, m0={m0}, m={m}")
    rng = seed.rng()
    edges = [(u, v) for u in range(m0) for v in range(u + 1, m0)]
    degree = np.zeros(n, dtype=np.float64)
    degree[:m0] = m0 - 1
    for new in range(m0, n):
        weights = degree[:new]
        total = weights.sum()
        # only reachable when m0 == 1: the seed node has no edges yet
        p = weights / total if total > 0 else np.full(new, 1.0 / new)
        targets = rng.choice(new, size=m, replace=False, p=p)
        for t in sorted(targets.tolist()):
            edges.append((t, new))
            degree[t] += 1
        degree[new] = m
    return Graph.from_edges([str(i) for i in range(n)], edges)
