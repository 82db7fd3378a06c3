"""Ranking metrics for link prediction: tie-aware AUC and expected precision.

Candidates are ranked by descending score. Scores closer than a relative
tolerance ``TIE_RTOL`` count as tied, so that values that are equal in exact
arithmetic but differ in the last bits (summation order) do not get an
arbitrary order. Ties are then resolved in expectation: half credit in AUC and
uniformly random order within the tie group for precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy.stats import rankdata

from .graph import Pair
from .scores import PairScores

TIE_RTOL = 1e-12


def tie_groups(sorted_desc: np.ndarray, rtol: float = TIE_RTOL) -> np.ndarray:
    """Group ids (0 = highest) for scores already sorted in descending order.
    Neighbours within ``rtol`` relative difference share a group."""
    x = np.asarray(sorted_desc, dtype=np.float64)
    if len(x) == 0:
        return np.zeros(0, dtype=np.int64)
    gap = x[:-1] - x[1:]
    if np.any(gap < 0):
        raise ValueError("scores must be sorted in descending order")
    scale = np.maximum(np.abs(x[:-1]), np.abs(x[1:]))
    breaks = gap > rtol * scale
    return np.concatenate([[0], np.cumsum(breaks)]).astype(np.int64)


def _grouped(values: np.ndarray, rtol: float) -> tuple[np.ndarray, np.ndarray]:
    """Descending order of ``values`` and the tie group of each ranked item."""
    order = np.argsort(-values, kind="stable")
    return order, tie_groups(values[order], rtol)


@dataclass(frozen=True)
class Ranking:
    """Candidate pairs by descending score, with tie groups; pairs inside one
    tie group are in ascending order (their scores agree within the tie
    tolerance but need not be bit-identical)."""

    pairs: np.ndarray   # (N, 2), u < v
    scores: np.ndarray
    group: np.ndarray

    def __len__(self) -> int:
        return len(self.scores)

    def group_size(self, i: int) -> int:
        return int(np.count_nonzero(self.group == self.group[i]))


def _canonical(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return np.stack([arr.min(axis=1), arr.max(axis=1)], axis=1)


def rank_candidates(scores: PairScores, candidates, rtol: float = TIE_RTOL) -> Ranking:
    pairs = _canonical(candidates)
    values = scores.lookup(pairs)
    order = np.lexsort((pairs[:, 1], pairs[:, 0], -values))
    group = tie_groups(values[order], rtol)
    # within a tie group the pair order alone decides, so scores that differ
    # only in the last bits never reorder the ranking
    order = order[np.lexsort((pairs[order, 1], pairs[order, 0], group))]
    return Ranking(pairs[order], values[order], group)


def _missing_mask(n: int, candidates: np.ndarray, missing: Iterable[Pair]) -> np.ndarray:
    cand_keys = candidates[:, 0] * n + candidates[:, 1]
    miss = _canonical(list(missing))
    miss_keys = miss[:, 0] * n + miss[:, 1]
    if len(np.unique(cand_keys)) != len(cand_keys):
        raise ValueError("candidate pairs must be distinct")
    mask = np.isin(cand_keys, miss_keys)
    if mask.sum() != len(np.unique(miss_keys)):
        raise ValueError("missing pairs must be a subset of the candidates")
    return mask


def mann_whitney_u(values: np.ndarray, positive: np.ndarray, rtol: float = TIE_RTOL) -> float:
    """U statistic of the positive class via midranks (ties share the mean rank)."""
    values = np.asarray(values, dtype=np.float64)
    positive = np.asarray(positive, dtype=bool)
    order, group = _grouped(values, rtol)
    # rank ascending by score: higher group id = lower score
    ranks = np.empty(len(values))
    ranks[order] = rankdata(-group, method="average")
    n_pos = int(positive.sum())
    return float(ranks[positive].sum() - n_pos * (n_pos + 1) / 2)


def auc_from_values(values: np.ndarray, positive: np.ndarray, rtol: float = TIE_RTOL) -> float:
    positive = np.asarray(positive, dtype=bool)
    n_pos = int(positive.sum())
    n_neg = len(positive) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs at least one positive and one negative candidate")
    return mann_whitney_u(values, positive, rtol) / (n_pos * n_neg)


def pairwise_auc(values: Iterable[float], positive: Iterable[bool]) -> Fraction:
    """``(n' + n''/2) / n`` by comparing every (positive, negative) pair with
    exact equality; quadratic, for checking the midrank version."""
    vals = list(values)
    pos = [v for v, p in zip(vals, positive) if p]
    neg = [v for v, p in zip(vals, positive) if not p]
    if not pos or not neg:
        raise ValueError("AUC needs at least one positive and one negative candidate")
    higher = sum(1 for a in pos for b in neg if a > b)
    equal = sum(1 for a in pos for b in neg if a == b)
    return Fraction(2 * higher + equal, 2 * len(pos) * len(neg))


def expected_precision_from_values(values: np.ndarray, positive: np.ndarray, p: int, rtol: float = TIE_RTOL) -> float:
    """Expected fraction of positives among the top ``p`` when ties are broken
    uniformly at random."""
    values = np.asarray(values, dtype=np.float64)
    positive = np.asarray(positive, dtype=bool)
    if not 1 <= p <= len(values):
        raise ValueError(f"depth p must lie in [1, {len(values)}], got {p}")
    order, group = _grouped(values, rtol)
    size = np.bincount(group)
    hits = np.bincount(group, weights=positive[order].astype(np.float64))
    before = np.concatenate([[0], np.cumsum(size)[:-1]])
    slots = np.clip(p - before, 0, size)
    return float(np.sum(slots * hits / size) / p)


def auc(scores: PairScores, candidates, missing: Iterable[Pair], rtol: float = TIE_RTOL) -> float:
    """Probability that a missing pair outscores a non-existent one, ties
    counting one half. Candidates absent from ``scores`` score 0."""
    cand = _canonical(candidates)
    return auc_from_values(scores.lookup(cand), _missing_mask(scores.n, cand, missing), rtol)


def expected_precision(scores: PairScores, candidates, missing: Iterable[Pair], p: int, rtol: float = TIE_RTOL) -> float:
    cand = _canonical(candidates)
    return expected_precision_from_values(scores.lookup(cand), _missing_mask(scores.n, cand, missing), p, rtol)
