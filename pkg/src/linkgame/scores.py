"""Sparse symmetric pair scores (higher means a link is more likely)."""

from __future__ import annotations

import csv
import io
from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp


class PairScores:
    """Scores for unordered node pairs. Pairs never materialised read as 0.

    Stored as an upper-triangular CSR matrix; explicit zeros are kept so that
    "computed and equal to zero" stays distinguishable from "absent".
    """

    def __init__(self, n: int, upper: sp.csr_matrix):
        self.n = n
        self._upper = upper

    @classmethod
    def from_sorted_keys(cls, n: int, keys: np.ndarray, values: np.ndarray) -> "PairScores":
        """Build from ascending linear keys ``u * n + v`` with ``u < v``."""
        keys = np.asarray(keys, dtype=np.int64)
        rows, cols = np.divmod(keys, n) if n else (keys, keys)
        if np.any(rows >= cols):
            raise ValueError("keys must encode pairs u < v")
        indptr = np.searchsorted(rows, np.arange(n + 1), side="left")
        upper = sp.csr_matrix((np.asarray(values, dtype=np.float64), cols, indptr), shape=(n, n))
        return cls(n, upper)

    @classmethod
    def from_dense(cls, values: np.ndarray, mask: np.ndarray | None = None) -> "PairScores":
        """Build from a symmetric ``(n, n)`` array; ``mask`` marks materialised pairs
        (default: every nonzero entry)."""
        n = values.shape[0]
        if mask is None:
            mask = values != 0
        rows, cols = np.nonzero(np.triu(mask, k=1))
        return cls.from_sorted_keys(n, rows * n + cols, values[rows, cols])

    @classmethod
    def from_pairs(cls, n: int, items: dict[tuple[int, int], float]) -> "PairScores":
        merged: dict[int, float] = {}
        for (u, v), s in items.items():
            if u == v:
                raise ValueError("pair scores are defined for distinct nodes only")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"pair ({u}, {v}) out of range")
            merged[min(u, v) * n + max(u, v)] = float(s)
        keys = np.array(sorted(merged), dtype=np.int64)
        return cls.from_sorted_keys(n, keys, np.array([merged[k] for k in keys.tolist()]))

    def __len__(self) -> int:
        return self._upper.nnz

    def __contains__(self, key) -> bool:
        u, v = key
        if u > v:
            u, v = v, u
        row = self._upper.indices[self._upper.indptr[u]:self._upper.indptr[u + 1]]
        return bool(np.any(row == v))

    def get(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        if u > v:
            u, v = v, u
        return float(self._upper[u, v])

    __call__ = get

    def __getitem__(self, key) -> float:
        return self.get(*key)

    def items(self) -> Iterator[tuple[int, int, float]]:
        coo = self._upper.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for i in order:
            yield int(coo.row[i]), int(coo.col[i]), float(coo.data[i])

    def to_dense(self) -> np.ndarray:
        upper = self._upper.toarray()
        return upper + upper.T

    def lookup(self, pairs: np.ndarray) -> np.ndarray:
        """Scores for an ``(N, 2)`` array of pairs (either orientation)."""
        pairs = np.asarray(pairs, dtype=np.int64)
        if len(pairs) == 0:
            return np.zeros(0)
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        return np.asarray(self._upper[lo, hi]).ravel()

    def scaled(self, factor: float) -> "PairScores":
        return PairScores(self.n, self._upper * factor)

    def to_csv(self, labels: Sequence[str]) -> str:
        """``label_u,label_v,score`` rows, score descending then label pair ascending."""
        rows = []
        for u, v, s in self.items():
            a, b = labels[u], labels[v]
            if b < a:
                a, b = b, a
            rows.append((a, b, s))
        rows.sort(key=lambda r: (-r[2], r[0], r[1]))
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for a, b, s in rows:
            writer.writerow([a, b, format_score(s)])
        return buf.getvalue()


def format_score(x: float) -> str:
    return f"{x:.12g}"
