"""Expanding groups of nodes (bounded balls) into all unordered pairs, and
summing per-pair contributions across groups."""

from __future__ import annotations

from typing import Iterator

import numpy as np

# Upper bound on (member, member) combinations expanded at once.
PAIR_BLOCK = 1 << 22


def group_blocks(sizes: np.ndarray, groups: range, limit: int = PAIR_BLOCK) -> list[range]:
    """Split a run of groups so each block expands to at most ``limit`` pairs
    (a single oversized group still forms its own block)."""
    blocks = []
    start, acc = groups.start, 0
    sq = sizes[groups.start:groups.stop].astype(np.int64) ** 2
    for i, q in zip(groups, sq.tolist()):
        if acc and acc + q > limit:
            blocks.append(range(start, i))
            start, acc = i, 0
        acc += q
    if groups.stop > start:
        blocks.append(range(start, groups.stop))
    return blocks


def group_pairs(members: np.ndarray, starts: np.ndarray, sizes: np.ndarray, groups: range) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs ``(i, j)`` into ``members`` such that both lie in the same
    group of ``groups`` and ``members[i] < members[j]``. Groups are consecutive
    runs of ``members`` given by ``starts``/``sizes`` (``starts`` is the
    exclusive prefix sum of ``sizes``)."""
    gs = sizes[groups.start:groups.stop].astype(np.int64)
    gst = starts[groups.start:groups.stop].astype(np.int64)
    if gs.sum() == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    idx = np.arange(gst[0], gst[0] + gs.sum())
    rep = np.repeat(gs, gs)  # per member: size of its group
    first = np.repeat(idx, rep)
    offset = np.arange(len(first)) - np.repeat(np.cumsum(rep) - rep, rep)
    second = np.repeat(np.repeat(gst, gs), rep) + offset
    keep = members[first] < members[second]
    return first[keep], second[keep]


class PairSums:
    """Accumulates values on linear pair keys ``u * n + v`` (``u < v``).

    Dense mode keeps an ``n * n`` buffer; sparse mode keeps sorted unique keys
    per block and merges them at the end. Either way a pair touched only by
    zero contributions is still reported.
    """

    def __init__(self, n: int, dense: bool):
        self.n = n
        self.dense = dense
        if dense:
            self.total = np.zeros(n * n)
            self.seen = np.zeros(n * n, dtype=bool)
        else:
            self.keys: list[np.ndarray] = []
            self.vals: list[np.ndarray] = []

    def add(self, keys: np.ndarray, vals: np.ndarray) -> None:
        uniq, inv = np.unique(keys, return_inverse=True)
        block = np.bincount(inv, weights=vals, minlength=len(uniq))
        if self.dense:
            # touch only this block's keys; a full n*n bincount per block
            # would make the cost quadratic in n regardless of ball sizes
            self.total[uniq] += block
            self.seen[uniq] = True
        else:
            self.keys.append(uniq)
            self.vals.append(block)

    def merge(self, other: "PairSums") -> None:
        if self.dense:
            self.total += other.total
            self.seen |= other.seen
        else:
            self.keys.extend(other.keys)
            self.vals.extend(other.vals)

    def result(self) -> tuple[np.ndarray, np.ndarray]:
        """Sorted keys and their summed values."""
        if self.dense:
            keys = np.flatnonzero(self.seen)
            return keys, self.total[keys]
        if not self.keys:
            return np.zeros(0, dtype=np.int64), np.zeros(0)
        keys, inv = np.unique(np.concatenate(self.keys), return_inverse=True)
        return keys, np.bincount(inv, weights=np.concatenate(self.vals), minlength=len(keys))

