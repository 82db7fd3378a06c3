"""Exponential-time reference implementations of the cooperative games and
their pairwise interaction indices.

Nothing here uses the neighbourhood tables or the counting kernels: distances
come from scipy's unrestricted all-pairs shortest paths and indices come from
enumerating permutations or coalitions. These are the oracles the fast kernels
are checked against.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Callable, Collection, Iterable

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .functions import DistanceFunction, SemivalueWeights
from .graph import Graph

DEFAULT_ENUMERATION_BOUND = 9

CharacteristicFunction = Callable[[frozenset], float]


class EnumerationBoundError(ValueError):
    pass


def all_pairs_distances(graph: Graph) -> np.ndarray:
    """Dense shortest-path matrix, ``inf`` for unreachable pairs."""
    if graph.n == 0:
        return np.zeros((0, 0))
    return shortest_path(graph.adjacency_matrix(weighted=True), method="D", directed=False)


def _closeness_value(dist: np.ndarray, members: Collection[int], f: DistanceFunction) -> float:
    if not members:
        return 0.0
    d = dist[list(members)].min(axis=0)
    outside = np.ones(dist.shape[0], dtype=bool)
    outside[list(members)] = False
    return float(np.sum(f(d[outside]))) if outside.any() else 0.0


def group_closeness(graph: Graph, group: Iterable[int], f: DistanceFunction, dist: np.ndarray | None = None) -> float:
    """Sum of ``f(dist(group, v))`` over nodes ``v`` outside the group."""
    if dist is None:
        dist = all_pairs_distances(graph)
    return _closeness_value(dist, frozenset(group), f)


class ClosenessGame:
    """Generalised group closeness as a characteristic function."""

    def __init__(self, graph: Graph, f: DistanceFunction):
        self.graph = graph
        self.f = f
        self.dist = all_pairs_distances(graph)
        self._cache: dict[frozenset, float] = {}

    def __call__(self, group: Iterable[int]) -> float:
        key = frozenset(group)
        if key not in self._cache:
            self._cache[key] = _closeness_value(self.dist, key, self.f)
        return self._cache[key]


class KDegreeGame:
    """Number of nodes outside the group within distance ``k`` of it."""

    def __init__(self, graph: Graph, k: float):
        self.graph = graph
        self.k = float(k)
        self.dist = all_pairs_distances(graph)

    def __call__(self, group: Iterable[int]) -> float:
        members = list(frozenset(group))
        if not members:
            return 0.0
        d = self.dist[members].min(axis=0)
        d[members] = np.inf
        return float(np.count_nonzero(d <= self.k))


def additive_game(group: Iterable[int]) -> float:
    return float(len(frozenset(group)))


def synergy(nu: CharacteristicFunction, coalition: Iterable[int], i: int, j: int) -> float:
    """``MC(C, {i,j}) - MC(C, i) - MC(C, j)`` expanded over ``nu``."""
    c = frozenset(coalition)
    if i == j:
        raise ValueError("synergy needs two distinct players")
    if i in c or j in c:
        raise ValueError("players must lie outside the coalition")
    return nu(c | {i, j}) - nu(c | {i}) - nu(c | {j}) + nu(c)


def _check_bound(graph: Graph, bound: int) -> None:
    if graph.n > bound:
        raise EnumerationBoundError(f"{graph.n} nodes exceeds the enumeration bound of {bound}")


def brute_force_shapley_interaction(
    graph: Graph,
    nu: CharacteristicFunction,
    s: int,
    t: int,
    bound: int = DEFAULT_ENUMERATION_BOUND,
) -> float:
    """Average synergy of ``s, t`` over every ordering of the player set in which
    ``s`` and ``t`` are merged into one player; the coalition is whatever
    precedes the merged player."""
    _check_bound(graph, bound)
    if s == t:
        raise ValueError("s and t must differ")
    merged = -1
    players = [v for v in range(graph.n) if v not in (s, t)] + [merged]
    total = 0.0
    count = 0
    for perm in itertools.permutations(players):
        pos = perm.index(merged)
        total += synergy(nu, perm[:pos], s, t)
        count += 1
    assert count == math.factorial(graph.n - 1)
    return total / count


def brute_force_semivalue_interaction(
    graph: Graph,
    nu: CharacteristicFunction,
    s: int,
    t: int,
    weights: SemivalueWeights,
    bound: int = DEFAULT_ENUMERATION_BOUND,
) -> float:
    """Sum over coalition sizes ``c`` of ``beta(c)`` times the mean synergy over
    all size-``c`` coalitions drawn from the other players."""
    _check_bound(graph, bound)
    if s == t:
        raise ValueError("s and t must differ")
    n = graph.n
    if weights.n != n:
        raise ValueError(f"weights are for {weights.n} players, graph has {n}")
    others = [v for v in range(n) if v not in (s, t)]
    total = 0.0
    for c in range(n - 1):
        coalitions = list(itertools.combinations(others, c))
        acc = sum(synergy(nu, C, s, t) for C in coalitions)
        total += weights[c] * acc / len(coalitions)
    return total


# Vectorised forms for exhaustive sweeps: the game is tabulated once over all
# 2^n coalitions (bitmasks) and indices for every pair are read off the table.


def _group_distances(dist: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distance from every bitmask group to every node, and membership flags.
    Row ``mask`` is built by doubling: masks containing node ``i`` extend the
    masks over nodes ``< i``."""
    n = dist.shape[0]
    group = np.full((1, n), np.inf)
    member = np.zeros((1, n), dtype=bool)
    for i in range(n):
        group = np.concatenate([group, np.minimum(group, dist[i])])
        with_i = member.copy()
        with_i[:, i] = True
        member = np.concatenate([member, with_i])
    return group, member


def closeness_table(dist: np.ndarray, f: DistanceFunction) -> np.ndarray:
    """``nu(S)`` for every bitmask ``S`` over the node set."""
    group, member = _group_distances(dist)
    return np.where(member, 0.0, f(np.where(member, 1.0, group))).sum(axis=1)


def k_degree_table(dist: np.ndarray, k: float) -> np.ndarray:
    group, member = _group_distances(dist)
    return np.count_nonzero(~member & (group <= k), axis=1).astype(np.float64)


@lru_cache(maxsize=None)
def _permutation_coalition_counts(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Enumerate all orderings of ``m`` single players plus one merged player;
    return (distinct predecessor bitmasks, number of orderings giving each)."""
    merged = m
    masks = []
    for perm in itertools.permutations(range(m + 1)):
        mask = 0
        for p in perm:
            if p == merged:
                break
            mask |= 1 << p
        masks.append(mask)
    uniq, counts = np.unique(np.array(masks, dtype=np.int64), return_counts=True)
    assert counts.sum() == math.factorial(m + 1)
    return uniq, counts


@lru_cache(maxsize=None)
def _pair_coalitions(n: int, slot_masks: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """For every pair ``s < t``: the coalition bitmasks over the other nodes
    obtained by mapping slot ``i`` to the ``i``-th node other than ``s, t``."""
    slots = np.array(slot_masks, dtype=np.int64)
    pairs = np.array(list(itertools.combinations(range(n), 2)), dtype=np.int64).reshape(-1, 2)
    coalitions = np.zeros((len(pairs), len(slots)), dtype=np.int64)
    for row, (s, t) in enumerate(pairs):
        others = [v for v in range(n) if v not in (s, t)]
        for slot, v in enumerate(others):
            coalitions[row] |= ((slots >> slot) & 1) << v
    return pairs, coalitions


def _pairwise(values: np.ndarray, n: int, slot_masks: np.ndarray, weights: np.ndarray) -> np.ndarray:
    pairs, c = _pair_coalitions(n, tuple(slot_masks.tolist()))
    bs = (1 << pairs[:, 0])[:, None]
    bt = (1 << pairs[:, 1])[:, None]
    syn = values[c | bs | bt] - values[c | bs] - values[c | bt] + values[c]
    index = np.zeros((n, n))
    index[pairs[:, 0], pairs[:, 1]] = syn @ weights
    return index + index.T


def permutation_interaction_matrix(values: np.ndarray, n: int) -> np.ndarray:
    """Shapley interaction index of every pair, by permutation enumeration."""
    masks, counts = _permutation_coalition_counts(n - 2)
    return _pairwise(values, n, masks, counts / math.factorial(n - 1))


def coalition_interaction_matrix(values: np.ndarray, n: int, weights: SemivalueWeights) -> np.ndarray:
    """Semivalue interaction index of every pair, by coalition enumeration."""
    m = n - 2
    slot_masks = np.arange(1 << m, dtype=np.int64)
    sizes = np.array([bin(x).count("1") for x in range(1 << m)])
    per_coalition = weights.beta[sizes] / np.array([math.comb(m, c) for c in sizes], dtype=np.float64)
    return _pairwise(values, n, slot_masks, per_coalition)
