"""Sensitivity-sampling coreset for the relaxed loss.

Construction: seed k centers B with k-means++, give each center the size of
its cluster as weight, then draw ``lam`` points i.i.d. with probability
proportional to ``||p - c|| / log2(|P_c| + 1)**2``. Each draw gets weight
``1 / (lam * s(p))`` and the same amount is taken off its center, so the
total weight stays exactly n. Center weights may become negative.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np

from .core import WeightedSet, as_points, assign, read_weighted_csv, write_csv
from .kmeanspp import best_of_kmeanspp_indices
from .loss import fitting_loss, size_divisor
from .rng import derive, make_rng, child_seed

Mode = Literal["practical", "theoretical"]

PRACTICAL_LAMBDA = 128


@dataclass(frozen=True)
class CoresetParams:
    k: int
    delta: float = 0.1
    eps: float = 0.5
    mode: Mode = "practical"
    lambda_override: int | None = None
    c_const: float = 1.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0.0 < self.delta <= 0.1:
            raise ValueError("delta must lie in (0, 1/10]")
        if not 0.0 < self.eps < 1.0:
            raise ValueError("eps must lie in (0, 1)")
        if self.mode not in ("practical", "theoretical"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.lambda_override is not None and self.lambda_override < 1:
            raise ValueError("lambda_override must be a positive integer")
        if self.c_const <= 0:
            raise ValueError("c_const must be positive")

    def sample_size(self, n: int, d: int) -> int:
        """Sample size; the theoretical one is the growth-rate expression times `c_const`."""
        if self.lambda_override is not None:
            return int(self.lambda_override)
        if self.mode == "practical":
            return PRACTICAL_LAMBDA
        # inner logarithms floored at 1 so k = 1 or tiny n do not zero the bound
        lk = max(math.log2(self.k), 1.0)
        ln = max(math.log2(n), 1.0)
        inner = self.k * d**3 * max(math.log2(lk * ln), 1.0) + math.log2(1.0 / self.delta)
        return max(1, math.ceil(self.c_const * lk * ln**4 / self.eps**2 * inner))

    def kmeanspp_rounds(self) -> int:
        if self.mode == "practical":
            return 1
        return math.ceil(math.log2(2.0 / self.delta))


@dataclass(frozen=True)
class Coreset:
    """Weighted coreset. The first `center_count` rows are the k-means++ centers."""

    data: WeightedSet
    center_count: int
    params: CoresetParams
    seed: int | None
    sample_size: int
    source_indices: np.ndarray

    def __len__(self) -> int:
        return len(self.data)

    @property
    def points(self) -> np.ndarray:
        return self.data.points

    @property
    def weights(self) -> np.ndarray:
        return self.data.weights

    def merged(self) -> "Coreset":
        """Collapse repeated source points into one row with the summed weight."""
        uniq, first, inv = np.unique(self.source_indices, return_index=True, return_inverse=True)
        order = np.argsort(first, kind="stable")
        w = np.bincount(inv, weights=self.data.weights, minlength=uniq.shape[0])[order]
        src = uniq[order]
        pts = self.data.points[first[order]]
        return Coreset(WeightedSet(pts, w), min(self.center_count, len(src)), self.params,
                       self.seed, self.sample_size, src)

    def sidecar(self) -> dict:
        return {
            "params": asdict(self.params),
            "seed": self.seed,
            "center_count": self.center_count,
            "lambda": self.sample_size,
            "size": len(self),
            "total_weight": self.data.total_weight,
        }

    def save(self, csv_path, sidecar_path=None) -> None:
        write_csv(csv_path, self.data.points, self.data.weights)
        if sidecar_path is None:
            sidecar_path = str(csv_path) + ".json"
        meta = self.sidecar()
        meta["source_indices"] = self.source_indices.tolist()
        with open(sidecar_path, "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)


def load_coreset(csv_path, sidecar_path=None) -> Coreset:
    data = read_weighted_csv(csv_path)
    if sidecar_path is None:
        sidecar_path = str(csv_path) + ".json"
    with open(sidecar_path) as fh:
        meta = json.load(fh)
    params = CoresetParams(**meta["params"])
    src = np.asarray(meta.get("source_indices", np.arange(len(data))), dtype=np.int64)
    return Coreset(data, int(meta["center_count"]), params, meta.get("seed"), int(meta["lambda"]), src)


def sensitivities(P, B):
    """Sampling distribution over P and the cluster sizes of B.

    ``s(p) = ||p - c_p|| / log2(|P_c| + 1)**2``, normalized to sum to 1.
    Raises if every point coincides with its center.
    """
    P = as_points(P)
    a = assign(P, B)
    scores = a.distances / size_divisor(a.sizes[a.labels], "relaxed")
    total = scores.sum()
    if not total > 0.0:
        raise ValueError("all points coincide with their centers; sensitivities undefined")
    return scores / total, a.sizes


def build_coreset(P, params: CoresetParams, rng=None, seed: int | None = None) -> Coreset:
    """Build a weighted coreset of P.

    `rng` may be a seed or Generator; `seed` is only recorded in the result.
    """
    P = as_points(P)
    n, d = P.shape
    if n < 2:
        raise ValueError("coreset construction needs n >= 2")
    if seed is None and isinstance(rng, (int, np.integer)):
        seed = int(rng)
    lam = params.sample_size(n, d)
    if n <= lam:
        return Coreset(WeightedSet(P, np.ones(n)), 0, params, seed, lam, np.arange(n))
    if n < params.k:
        raise ValueError(f"need at least k={params.k} points, got n={n}")
    rng = make_rng(rng)
    base = child_seed(rng)
    b_idx, _ = best_of_kmeanspp_indices(P, params.k, params.delta, derive(base, "seed"),
                                        rounds=params.kmeanspp_rounds())
    B = P[b_idx]
    a = assign(P, B)
    center_w = a.sizes.astype(np.float64)
    if fitting_loss(P, B) == 0.0:
        return Coreset(WeightedSet(B, center_w), len(b_idx), params, seed, lam, b_idx.copy())
    s, _ = sensitivities(P, B)
    cdf = np.cumsum(s)
    u = derive(base, "sample").random(lam) * cdf[-1]
    draws = np.searchsorted(cdf, u, side="right")
    draws = np.minimum(draws, n - 1)
    # rounding can land on a zero-probability slot at the very end; step back
    for t in np.flatnonzero(s[draws] == 0.0):
        j = draws[t]
        while s[j] == 0.0:
            j -= 1
        draws[t] = j
    sample_w = 1.0 / (lam * s[draws])
    owed = np.bincount(a.labels[draws], weights=sample_w, minlength=len(b_idx))
    center_w = center_w - owed
    pts = np.vstack((B, P[draws]))
    w = np.concatenate((center_w, sample_w))
    src = np.concatenate((b_idx, draws)).astype(np.int64)
    return Coreset(WeightedSet(pts, w), len(b_idx), params, seed, lam, src)
