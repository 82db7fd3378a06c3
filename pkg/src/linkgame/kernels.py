"""All-pairs generalised-closeness interaction indices by counting.

Group closeness splits into per-node games ``nu_u(C) = F(dist(C, u))`` with
``F(0) = 0``. For a pair ``s, t`` outside ``C``, let ``b`` be the larger of
``dist(s, u)`` and ``dist(t, u)`` and ``c = dist(C, u)``. The synergy at ``u``
is then ``[c > b] * (F(c) - F(b))``, so only nodes ``u`` whose ball holds both
endpoints contribute, and the contribution depends on the pair only through
the level ``b``. For each ``u`` we therefore compute one value per distinct
distance of its list, scanning the levels from the far end, and add it to
every pair of ball members whose farther endpoint sits at that level.

Expectations over coalitions reduce to probabilities of the form "no
coalition member is closer than ``d``", which depend only on the cumulative
counts ``Nod``:

* Shapley (random orderings of the merged player set):
  ``P[c > b] = 1 / (Nod_leq(b) - 1)``.
* Semivalue with size distribution ``beta``:
  ``P[c > b] = W(Nod_gt(b))`` where
  ``W(N) = sum_c beta(c) * binom(N, c) / binom(n - 2, c)``.

All nodes ``u`` are processed together: levels and ball entries of the whole
table live in flat arrays (see ``NeighborhoodTable.flat``). Scores are stored
negated, so that a higher score means more similar.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from ._pairs import PairSums, group_blocks, group_pairs
from .functions import DistanceFunction, SemivalueWeights
from .neighborhood import FlatLayout, NeighborhoodTable
from .scores import PairScores

# Dense n*n accumulation below this node count, sorted sparse keys above.
DENSE_LIMIT = 3000

# Level coefficients, given (nod_lt, nod_leq) of each level:
#   suffix term: weight of f(d') for levels d' strictly beyond the pair level
#   direct term: weight of f(b) at the pair level itself
Terms = tuple[Callable[[np.ndarray, np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]


def _check_radius(table: NeighborhoodTable, f: DistanceFunction) -> None:
    if table.radius != float(f.radius):
        raise ValueError(f"table radius {table.radius} does not match f radius {f.radius}")


def level_values(flat: FlatLayout, f: DistanceFunction, terms: Terms) -> np.ndarray:
    """Per (node u, level b): the interaction contribution of ``u`` to any pair
    whose farther endpoint lies at distance ``b`` from ``u``."""
    suffix_term, direct_term = terms
    local = flat.level_local
    L = len(local)
    beyond0 = local >= 1
    # level 1 is never strictly beyond a pair level, so its suffix term
    # (degenerate for Shapley: nod_lt = 1) is not needed
    beyond1 = local >= 2

    fv = np.zeros(L)
    fv[beyond0] = f(flat.level_value[beyond0])
    assert np.all(flat.nod_leq[beyond0] >= 2)
    direct = np.zeros(L)
    direct[beyond0] = direct_term(flat.nod_leq[beyond0])
    farther = np.zeros(L)
    farther[beyond1] = fv[beyond1] * suffix_term(flat.nod_lt[beyond1], flat.nod_leq[beyond1])

    # descending scan over levels, all owners at once:
    # suffix(u, j) = suffix(u, j + 1) + farther(u, j + 1)
    suffix = np.zeros(L)
    if L:
        has_next = np.zeros(L, dtype=bool)
        has_next[:-1] = flat.level_owner[1:] == flat.level_owner[:-1]
        for depth in range(int(local.max()) - 1, 0, -1):
            idx = np.flatnonzero((local == depth) & has_next)
            suffix[idx] = suffix[idx + 1] + farther[idx + 1]
    return np.where(beyond0, suffix - fv * direct, 0.0)


def _accumulate(flat: FlatLayout, g: np.ndarray, n: int, owners: range, dense: bool) -> PairSums:
    sums = PairSums(n, dense)
    for block in group_blocks(flat.entry_size, owners):
        first, second = group_pairs(flat.entry_node, flat.entry_start, flat.entry_size, block)
        level = np.maximum(flat.entry_level[first], flat.entry_level[second])
        sums.add(flat.entry_node[first] * n + flat.entry_node[second], g[level])
    return sums


def _chunks(n: int, parts: int) -> list[range]:
    bounds = np.linspace(0, n, parts + 1).round().astype(int)
    return [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _all_pairs(table: NeighborhoodTable, f: DistanceFunction, terms: Terms, threads: int, dense_limit: int) -> PairScores:
    if threads < 1:
        raise ValueError("threads must be at least 1")
    n = table.node_count
    flat = table.flat
    g = level_values(flat, f, terms)
    dense = n <= dense_limit
    parts = _chunks(n, threads) if threads > 1 else [range(n)]
    if len(parts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda r: _accumulate(flat, g, n, r, dense), parts))
    else:
        results = [_accumulate(flat, g, n, range(n), dense)]
    # merge partial sums in chunk order so the result depends only on `threads`
    sums = results[0]
    for other in results[1:]:
        sums.merge(other)
    keys, vals = sums.result()
    return PairScores.from_sorted_keys(n, keys, -vals + 0.0)


def _shapley_terms() -> Terms:
    return (
        lambda lt, leq: 1.0 / (lt - 1.0) - 1.0 / (leq - 1.0),
        lambda leq: 1.0 / (leq - 1.0),
    )


def shapley_closeness_all_pairs(
    table: NeighborhoodTable,
    f: DistanceFunction,
    threads: int = 1,
    dense_limit: int = DENSE_LIMIT,
) -> PairScores:
    """Negated Shapley interaction index of the group-closeness game for every
    pair that shares at least one bounded ball.

    Parameters
    ----------
    table
        Bounded distance lists built with the same radius as ``f``.
    f
        Distance function of the closeness game.
    threads
        Worker threads over the outer node loop. ``threads=1`` is bit-stable;
        other values agree up to floating-point summation order.
    """
    _check_radius(table, f)
    return _all_pairs(table, f, _shapley_terms(), threads, dense_limit)


def coalition_probability_table(weights: SemivalueWeights) -> np.ndarray:
    """``W(N) = sum_c beta(c) * binom(N, c) / binom(n - 2, c)`` for ``N = 0..n-2``.

    The binomial ratios are iterated products of ``(N - i) / (n - 2 - i)``, so
    no factorial or binomial coefficient is ever formed.
    """
    m = weights.n - 2
    N = np.arange(m + 1, dtype=np.float64)
    ratio = np.ones(m + 1)
    W = weights.beta[0] * ratio
    for c in range(1, m + 1):
        ratio = ratio * np.maximum(N - (c - 1), 0.0) / (m - (c - 1))
        W = W + weights.beta[c] * ratio
    return W


def semivalue_closeness_all_pairs(
    table: NeighborhoodTable,
    f: DistanceFunction,
    weights: SemivalueWeights,
    threads: int = 1,
    dense_limit: int = DENSE_LIMIT,
) -> PairScores:
    """Negated semivalue interaction index (coalition sizes weighted by
    ``weights.beta``) of the group-closeness game, for every pair sharing a
    bounded ball."""
    _check_radius(table, f)
    n = table.node_count
    if weights.n != n:
        raise ValueError(f"weights are for {weights.n} players, graph has {n}")
    W = coalition_probability_table(weights)
    terms = (
        lambda lt, leq: W[n - lt] - W[n - leq],
        lambda leq: W[n - leq],
    )
    return _all_pairs(table, f, terms, threads, dense_limit)
