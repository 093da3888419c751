"""Exhaustive minimization of the size-normalized loss over data-point subsets.

``exhaustive_approx(D, k)`` scans every k-subset of the data (as center
candidates) in lexicographic index order and keeps the first one with the
smallest weighted relaxed loss. With nonnegative weights the result is a
``2 * log2(1 + n)**2`` approximation of the best k centers anywhere in R^d.
Run time is ``O(C(n, k) * n * k)`` after an ``O(n^2 d)`` distance table, so in
practice it is applied to coresets or other small sets.
"""
from __future__ import annotations

import math

import numpy as np

from . import _backend
from .core import as_weighted
from .loss import Objective, SizeSource, size_divisor

DEFAULT_BUDGET = 10**9

_SIZE_MODES = {"count": 0, "mass": 1, "certified": 2}


class EnumerationTooLarge(ValueError):
    """The subset scan would exceed the configured evaluation budget."""


def enumeration_cost(n: int, k: int, d: int) -> int:
    """Elementary distance evaluations of a naive scan: ``C(n,k) * n * d * k``."""
    return math.comb(n, k) * n * d * k


def _best_single(points, weights, objective, size_source):
    # k = 1: one column of the distance table at a time, no n x n table needed
    n = points.shape[0]
    if size_source == "count":
        size = float(n)
    elif size_source == "mass":
        size = max(float(weights.sum()), 1.0)
    else:
        size = max(float(weights.sum()), float(n))
    div = float(size_divisor(size, objective))
    kern = _backend.kernels
    best, best_loss = 0, math.inf
    step = max(1, (1 << 22) // max(1, n))
    for lo in range(0, n, step):
        D = kern.pairwise(points[lo:lo + step], points)
        sums = D @ weights
        if size_source == "certified":
            sums = np.maximum(sums, D.sum(axis=1))
        losses = sums / div
        i = int(losses.argmin())
        if losses[i] < best_loss:
            best, best_loss = lo + i, float(losses[i])
    return (best,), best_loss


def exhaustive_approx_indices(D, k: int, size_source: SizeSource = "mass",
                              objective: Objective = "relaxed",
                              budget: int | None = DEFAULT_BUDGET):
    """Indices (ascending) of the optimal k-subset and its loss.

    ``objective="fitting"`` swaps in the fitting loss; that variant carries no
    approximation guarantee but is what the two-disc motivation experiment
    uses.
    """
    D = as_weighted(D)
    n, d = D.points.shape
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < k:
        raise ValueError(f"need at least k={k} points, got n={n}")
    if budget is not None and enumeration_cost(n, k, d) > budget:
        raise EnumerationTooLarge(
            f"exhaustive search over C({n},{k}) subsets exceeds the budget of {budget} "
            "distance evaluations; build a coreset first (approx_on_coreset) or raise the budget")
    if objective not in ("relaxed", "fitting"):
        raise ValueError(f"unknown objective {objective!r}")
    if size_source not in _SIZE_MODES:
        raise ValueError(f"unknown size_source {size_source!r}")
    weights = np.ascontiguousarray(D.weights, dtype=np.float64)
    if k == 1:
        return _best_single(D.points, weights, objective, size_source)
    kern = _backend.kernels
    dist = kern.pairwise(D.points, D.points)
    return kern.best_subset(dist, weights, k, objective == "fitting", _SIZE_MODES[size_source])


def exhaustive_approx(D, k: int, size_source: SizeSource = "mass",
                      objective: Objective = "relaxed",
                      budget: int | None = DEFAULT_BUDGET) -> np.ndarray:
    """The k data points minimizing the weighted loss, as a ``(k, d)`` array."""
    D = as_weighted(D)
    idx, _ = exhaustive_approx_indices(D, k, size_source, objective, budget)
    return D.points[list(idx)].copy()
