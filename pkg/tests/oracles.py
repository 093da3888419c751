"""Brute-force reference implementations for the test suite.

Nothing here imports the package under test; every quantity is recomputed
from its definition with plain loops so that agreement is meaningful.
"""
from __future__ import annotations

import itertools
import math

import numpy as np


def dist(p, q) -> float:
    return math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(p, q)))


def nearest_index(p, C) -> int:
    best, arg = math.inf, 0
    for j, c in enumerate(C):
        v = dist(p, c)
        if v < best:
            best, arg = v, j
    return arg


def naive_loss(P, C, weights=None, objective="relaxed", size="count") -> float:
    """Loss of centers C on (P, weights); `size` is "count" or "mass" (floored at 1)."""
    P = [list(np.atleast_1d(p)) for p in P]
    C = [list(np.atleast_1d(c)) for c in C]
    if weights is None:
        weights = [1.0] * len(P)
    groups = {}
    for p, w in zip(P, weights):
        groups.setdefault(nearest_index(p, C), []).append((p, float(w)))
    total = 0.0
    for j, members in groups.items():
        s = sum(w * dist(p, C[j]) for p, w in members)
        if size == "count":
            m = float(len(members))
        else:
            m = max(sum(w for _, w in members), 1.0)
        if objective == "fitting":
            total += s / (m + 1.0)
        else:
            total += s / math.log2(m + 1.0) ** 2
    return total


def naive_approx(P, k, weights=None, objective="relaxed", size="count"):
    """Best k-subset of P as center candidates: ``(index tuple, loss)``.

    Scans combinations in lexicographic order and keeps the first minimum.
    """
    best, best_loss = None, math.inf
    for idx in itertools.combinations(range(len(P)), k):
        v = naive_loss(P, [P[i] for i in idx], weights, objective, size)
        if v < best_loss:
            best, best_loss = idx, v
    return best, best_loss


def grid_opt(P, k, grid_step=1e-3, loss="relaxed", max_evals=5 * 10**8):
    """Grid search for the best k centers of 1-D points over [min P, max P].

    Returns ``(centers, value)``. Vectorized over the grid, but the loss is
    the plain definition: nearest-center partition, per-cluster divisor.
    """
    x = np.asarray(P, dtype=np.float64).reshape(-1)
    if k not in (1, 2):
        raise ValueError("grid_opt supports k in {1, 2}")
    grid = np.arange(x.min(), x.max() + grid_step / 2, grid_step)
    if grid.shape[0] ** k * x.shape[0] > max_evals:
        raise ValueError("grid search budget exceeded")

    def divisor(m):
        return m + 1.0 if loss == "fitting" else np.log2(m + 1.0) ** 2

    D = np.abs(x[None, :] - grid[:, None])  # (g, n)
    if k == 1:
        vals = D.sum(axis=1) / divisor(x.shape[0])
        i = int(vals.argmin())
        return [grid[i]], float(vals[i])
    best, best_val = None, math.inf
    for i in range(grid.shape[0]):
        d1 = D[i][None, :]
        d2 = D[i:]
        to1 = d1 <= d2
        m1 = to1.sum(axis=1)
        m2 = x.shape[0] - m1
        s1 = np.where(to1, d1, 0.0).sum(axis=1)
        s2 = np.where(to1, 0.0, d2).sum(axis=1)
        v = np.where(m1 > 0, s1 / divisor(np.maximum(m1, 1)), 0.0)
        v = v + np.where(m2 > 0, s2 / divisor(np.maximum(m2, 1)), 0.0)
        j = int(v.argmin())
        if v[j] < best_val:
            best, best_val = [grid[i], grid[i + j]], float(v[j])
    return best, best_val


def naive_silhouette(P, labels) -> float:
    P = [list(np.atleast_1d(p)) for p in P]
    labels = list(labels)
    n = len(P)
    vals = []
    for i in range(n):
        own = [j for j in range(n) if labels[j] == labels[i] and j != i]
        if not own:
            vals.append(0.0)
            continue
        a = sum(dist(P[i], P[j]) for j in own) / len(own)
        b = math.inf
        for lab in set(labels):
            if lab == labels[i]:
                continue
            other = [j for j in range(n) if labels[j] == lab]
            b = min(b, sum(dist(P[i], P[j]) for j in other) / len(other))
        vals.append((b - a) / max(a, b) if max(a, b) > 0 else 0.0)
    return sum(vals) / n


def naive_sensitivities(P, B):
    P = [list(np.atleast_1d(p)) for p in P]
    B = [list(np.atleast_1d(b)) for b in B]
    lab = [nearest_index(p, B) for p in P]
    sizes = [lab.count(j) for j in range(len(B))]
    scores = [dist(p, B[l]) / math.log2(sizes[l] + 1) ** 2 for p, l in zip(P, lab)]
    total = sum(scores)
    return [s / total for s in scores], sizes
