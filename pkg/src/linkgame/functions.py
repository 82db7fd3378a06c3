"""Distance functions for group closeness and semivalue weight families."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

KINDS = ("inverse_square", "inverse", "inverse_exponential", "indicator")


def normalize_kind(name: str) -> str:
    kind = name.strip().lower().replace("-", "_")
    aliases = {"inverse_squared": "inverse_square", "exponential": "inverse_exponential", "degree": "indicator"}
    kind = aliases.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"unknown distance function {name!r}; choose from {', '.join(KINDS)}")
    return kind


@dataclass(frozen=True)
class DistanceFunction:
    """``f(d)`` with a hard cutoff: zero for ``d > radius`` and for ``d = inf``.

    ``scale`` multiplies every value; it exists so rankings can be checked for
    invariance under positive rescaling.
    """

    kind: str
    radius: float
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", normalize_kind(self.kind))
        if not float(self.radius) > 0:
            raise ValueError("radius must be positive")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def _raw(self, d):
        if self.kind == "inverse_square":
            return 1.0 / (d * d)
        if self.kind == "inverse":
            return 1.0 / d
        if self.kind == "inverse_exponential":
            return np.exp2(-d)
        return np.ones_like(d)

    def __call__(self, d):
        """Evaluate at a distance (scalar or array). Distances must be positive;
        group-closeness never evaluates ``f`` at distance 0."""
        arr = np.asarray(d, dtype=np.float64)
        if np.any(arr <= 0):
            raise ValueError("f is only defined for positive distances")
        inside = arr <= self.radius  # False for inf
        safe = np.where(inside, arr, 1.0)
        out = np.where(inside, self.scale * self._raw(safe), 0.0)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class SemivalueWeights:
    """Probability distribution ``beta`` over coalition sizes ``0..n-2``."""

    n: int
    beta: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=np.float64)
        if self.n < 2:
            raise ValueError("semivalue weights need at least 2 players")
        if beta.shape != (self.n - 1,):
            raise ValueError(f"beta must have length n - 1 = {self.n - 1}, got {beta.shape}")
        if np.any(beta < 0):
            raise ValueError("beta must be nonnegative")
        if abs(beta.sum() - 1.0) > 1e-9:
            raise ValueError(f"beta must sum to 1, sums to {beta.sum()!r}")
        object.__setattr__(self, "beta", beta)

    def __getitem__(self, c: int) -> float:
        return float(self.beta[c])


def shapley_weights(n: int) -> SemivalueWeights:
    if n < 2:
        raise ValueError("n must be at least 2")
    return SemivalueWeights(n, np.full(n - 1, 1.0 / (n - 1)), "shapley")


def banzhaf_weights(n: int) -> SemivalueWeights:
    if n < 2:
        raise ValueError("n must be at least 2")
    beta = binom.pmf(np.arange(n - 1), n - 2, 0.5)
    return SemivalueWeights(n, beta / beta.sum(), "banzhaf")


WEIGHT_FAMILIES = {"shapley": shapley_weights, "banzhaf": banzhaf_weights}


def weights_for(name: str, n: int) -> SemivalueWeights:
    try:
        return WEIGHT_FAMILIES[name.strip().lower()](n)
    except KeyError:
        raise ValueError(f"unknown weight family {name!r}; choose from {', '.join(WEIGHT_FAMILIES)}") from None
