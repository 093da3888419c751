"""Bi-criteria approximation through sampled robust medians.

Repeatedly: draw a uniform sample from the remaining points, take the sample
point whose closest ``15|S|/(16k)`` sample neighbours are cheapest (a robust
median), record it as a center and discard the ``3|P'|/(4k)`` remaining points
nearest to it. The result has ``O(k log n)`` centers with fitting loss
``O(k log n)`` times optimal, with probability ``1 - delta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import _backend
from .approx import exhaustive_approx_indices
from .core import as_points, pairwise_distances
from .rng import make_rng

Mode = Literal["practical", "theoretical"]

PRACTICAL_LAMBDA = 64


@dataclass(frozen=True)
class BiCriteriaParams:
    k: int
    delta: float = 0.1
    mode: Mode = "practical"
    lambda_override: int | None = None
    c_const: float = 1.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0.0 < self.delta <= 0.1:
            raise ValueError("delta must lie in (0, 1/10]")
        if self.mode not in ("practical", "theoretical"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.lambda_override is not None and self.lambda_override < 1:
            raise ValueError("lambda_override must be a positive integer")
        if self.c_const <= 0:
            raise ValueError("c_const must be positive")

    def sample_size(self, n: int) -> int:
        if self.lambda_override is not None:
            return int(self.lambda_override)
        if self.mode == "practical":
            return PRACTICAL_LAMBDA
        return max(1, math.ceil(self.c_const * self.k**2 * math.log2(n / self.delta)))


def _closest_count(dist: np.ndarray, m: int) -> np.ndarray:
    """Indices of the m smallest entries of `dist`, lowest index first among equals."""
    n = dist.shape[0]
    if m <= 0:
        return np.empty(0, dtype=np.int64)
    if m >= n:
        return np.arange(n)
    kth = np.partition(dist, m - 1)[m - 1]
    below = np.flatnonzero(dist < kth)
    at = np.flatnonzero(dist == kth)[: m - below.shape[0]]
    return np.sort(np.concatenate((below, at)))


def closest(P, q, gamma: float) -> np.ndarray:
    """Sorted indices of the ``ceil(gamma * n)`` points of P nearest to q."""
    P = as_points(P)
    if P.shape[0] == 0:
        raise ValueError("P must be nonempty")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    m = math.ceil(gamma * P.shape[0])
    dist = pairwise_distances(P, np.asarray(q, dtype=np.float64).reshape(1, -1))[:, 0]
    return _closest_count(dist, m)


def robust_median_of_sample(S, k: int, keep: int | None = None):
    """Index into S of the point with the cheapest neighbourhood, and its loss.

    For each p in S the neighbourhood is its ``max(1, floor(15|S|/(16k)))``
    closest sample points (p included) and its loss is the single-center
    fitting loss of that neighbourhood.
    """
    S = as_points(S)
    m = S.shape[0]
    if m == 0:
        raise ValueError("sample is empty")
    if keep is None:
        keep = max(1, (15 * m) // (16 * k))
    keep = min(max(1, int(keep)), m)
    scores = _backend.kernels.median_scores(S, keep)
    i = int(scores.argmin())
    return i, float(scores[i])


@dataclass
class BiCriteriaResult:
    centers: np.ndarray
    indices: np.ndarray
    iterations: int
    remaining_sizes: list


def bicriteria_run(P, params: BiCriteriaParams, rng=None) -> BiCriteriaResult:
    """Run the bi-criteria loop and report the trace alongside the centers."""
    P = as_points(P)
    n = P.shape[0]
    if n < 2:
        raise ValueError("bi-criteria needs n >= 2")
    rng = make_rng(rng)
    lam = params.sample_size(n)
    k = params.k
    remaining = np.arange(n)
    chosen: list[int] = []
    sizes = [n]
    while remaining.shape[0] >= 2 * lam:
        m = remaining.shape[0]
        sample = remaining[rng.integers(0, m, size=lam)]
        i, _ = robust_median_of_sample(P[sample], k)
        p = int(sample[i])
        dist = pairwise_distances(P[remaining], P[p:p + 1])[:, 0]
        drop = _closest_count(dist, max(1, (3 * m) // (4 * k)))
        keep_mask = np.ones(m, dtype=bool)
        keep_mask[drop] = False
        chosen.append(p)
        remaining = remaining[keep_mask]
        if remaining.shape[0] >= sizes[-1]:
            raise RuntimeError("bi-criteria loop made no progress")
        sizes.append(remaining.shape[0])
    iterations = len(chosen)
    if params.mode == "theoretical" or remaining.shape[0] <= k:
        tail = remaining
    else:
        idx, _ = exhaustive_approx_indices(P[remaining], k, size_source="count")
        tail = remaining[list(idx)]
    indices = np.concatenate((np.asarray(chosen, dtype=np.int64), tail.astype(np.int64)))
    return BiCriteriaResult(P[indices].copy(), indices, iterations, sizes)


def bicriteria(P, params: BiCriteriaParams, rng=None) -> np.ndarray:
    """The center set B (a subset of P's points)."""
    return bicriteria_run(P, params, rng).centers
