"""k-means++ seeding, Lloyd refinement, and the best-of-rounds wrapper."""
from __future__ import annotations

import math

import numpy as np

from .core import as_points, nearest
from .rng import child_seed, derive, make_rng


def dsquared_seed_indices(P, k: int, rng=None) -> np.ndarray:
    """Indices of k distinct data points chosen by D^2 sampling.

    The first index is uniform; every further index is drawn among the points
    not yet chosen with probability proportional to the squared distance to
    the nearest chosen point (uniformly if all those distances are zero).
    """
    P = as_points(P)
    n = P.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < k:
        raise ValueError(f"need at least k={k} points, got n={n}")
    rng = make_rng(rng)
    chosen = np.empty(k, dtype=np.int64)
    available = np.ones(n, dtype=bool)
    first = int(rng.integers(n))
    chosen[0] = first
    available[first] = False
    _, d = nearest(P, P[first:first + 1])
    d2 = d * d
    for i in range(1, k):
        mass = np.where(available, d2, 0.0)
        total = mass.sum()
        if total > 0.0:
            cdf = np.cumsum(mass)
            u = rng.random() * cdf[-1]
            j = int(np.searchsorted(cdf, u, side="right"))
            j = min(j, n - 1)
            # guard against landing on a zero-mass slot through rounding
            while not available[j] or mass[j] == 0.0:
                j -= 1
        else:
            free = np.flatnonzero(available)
            j = int(free[rng.integers(free.shape[0])])
        chosen[i] = j
        available[j] = False
        _, dj = nearest(P, P[j:j + 1])
        np.minimum(d2, dj * dj, out=d2)
    return chosen


def dsquared_seed(P, k: int, rng=None) -> np.ndarray:
    P = as_points(P)
    return P[dsquared_seed_indices(P, k, rng)].copy()


def lloyd_refine(P, C, iters: int = 10) -> np.ndarray:
    """Up to `iters` assign/centroid steps; empty clusters keep their center."""
    P = as_points(P)
    C = as_points(C, "centers").copy()
    if C.shape[0] == 0:
        raise ValueError("center set is empty")
    m, d = C.shape
    for _ in range(iters):
        labels, _ = nearest(P, C)
        counts = np.bincount(labels, minlength=m)
        sums = np.zeros((m, d))
        np.add.at(sums, labels, P)
        new = C.copy()
        nz = counts > 0
        new[nz] = sums[nz] / counts[nz, None]
        if np.array_equal(new, C):
            break
        C = new
    return C


def kmeans(P, k: int, rng=None, iters: int = 10) -> np.ndarray:
    """The k-means baseline: D^2 seeding followed by Lloyd iterations."""
    return lloyd_refine(P, dsquared_seed(P, k, rng), iters)


def n_rounds(delta: float) -> int:
    """ceil(log2(2 / delta)) seeding rounds."""
    if not 0.0 < delta <= 0.1:
        raise ValueError("delta must lie in (0, 1/10]")
    return math.ceil(math.log2(2.0 / delta))


def best_of_kmeanspp_indices(P, k: int, delta: float = 0.1, rng=None, rounds: int | None = None):
    """Best of several D^2 seedings by total (unsquared) nearest-center distance.

    `rounds` defaults to ``ceil(log2(2/delta))``. Each round draws from its own
    stream ``round:i`` so adding rounds never changes earlier candidates.
    Returns ``(indices, cost)``; ties go to the earliest round.
    """
    P = as_points(P)
    if rounds is None:
        rounds = n_rounds(delta)
    elif rounds < 1:
        raise ValueError("rounds must be >= 1")
    base = child_seed(make_rng(rng))
    best, best_cost = None, math.inf
    for i in range(rounds):
        idx = dsquared_seed_indices(P, k, derive(base, f"round:{i}"))
        _, dist = nearest(P, P[idx])
        cost = float(dist.sum())
        if cost < best_cost:
            best, best_cost = idx, cost
    return best, best_cost


def best_of_kmeanspp(P, k: int, delta: float = 0.1, rng=None, rounds: int | None = None) -> np.ndarray:
    P = as_points(P)
    idx, _ = best_of_kmeanspp_indices(P, k, delta, rng, rounds)
    return P[idx].copy()
