"""Pure numpy implementations of the hot kernels.

Same signatures and tie rules as the compiled ``_ckernels`` module; used when
the extension is not built or when ``set_backend("python")`` is requested.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

# elements per temporary block in the batched loops
_BLOCK = 1 << 22


def pairwise(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    n, m = P.shape[0], Q.shape[0]
    out = np.empty((n, m), dtype=np.float64)
    step = max(1, _BLOCK // max(1, m * P.shape[1]))
    for lo in range(0, n, step):
        diff = P[lo:lo + step, None, :] - Q[None, :, :]
        out[lo:lo + step] = np.sqrt((diff * diff).sum(axis=-1))
    return out


def nearest_center(P: np.ndarray, C: np.ndarray):
    n, m = P.shape[0], C.shape[0]
    labels = np.empty(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.float64)
    step = max(1, _BLOCK // max(1, m * P.shape[1]))
    for lo in range(0, n, step):
        D = pairwise(P[lo:lo + step], C)
        # argmin returns the first minimum: lowest center index wins ties
        lab = D.argmin(axis=1)
        labels[lo:lo + step] = lab
        dist[lo:lo + step] = D[np.arange(D.shape[0]), lab]
    return labels, dist


def _divisor(sizes: np.ndarray, fitting: bool) -> np.ndarray:
    if fitting:
        return sizes + 1.0
    lg = np.log2(sizes + 1.0)
    return lg * lg


def best_subset(dist: np.ndarray, weights: np.ndarray, k: int, fitting: bool, size_mode: int):
    """Lexicographic scan over k-subsets of candidate columns of `dist`.

    ``dist[i, j]`` is the distance from data point i to candidate j. Returns
    ``(indices, loss)`` of the first subset attaining the minimal loss.
    `size_mode`: 0 member count, 1 weight mass floored at 1, 2 certified.
    """
    n = dist.shape[0]
    best_loss = math.inf
    best = None
    batch = max(1, _BLOCK // max(1, n * k))
    combos = itertools.combinations(range(n), k)
    while True:
        chunk = np.array(list(itertools.islice(combos, batch)), dtype=np.int64)
        if chunk.size == 0:
            break
        chunk = chunk.reshape(-1, k)
        # (n, b, k) distances of every point to every center of every subset
        D = dist[:, chunk]
        lab = D.argmin(axis=2)
        dmin = np.take_along_axis(D, lab[..., None], axis=2)[..., 0]
        b = chunk.shape[0]
        losses = np.zeros(b)
        wd = dmin * weights[:, None]
        for j in range(k):
            member = lab == j
            s = np.where(member, wd, 0.0).sum(axis=0)
            cnt = member.sum(axis=0).astype(np.float64)
            if size_mode == 0:
                size = cnt
            else:
                mass = np.where(member, weights[:, None], 0.0).sum(axis=0)
                size = np.maximum(mass, 1.0 if size_mode == 1 else cnt)
                if size_mode == 2:
                    s = np.maximum(s, np.where(member, dmin, 0.0).sum(axis=0))
            term = np.where(cnt > 0, s / _divisor(np.where(cnt > 0, size, 1.0), fitting), 0.0)
            losses += term
        i = int(losses.argmin())
        if losses[i] < best_loss:
            best_loss = float(losses[i])
            best = tuple(int(x) for x in chunk[i])
    return best, best_loss


def median_scores(S: np.ndarray, keep: int) -> np.ndarray:
    """For every point p of S: sum of its `keep` smallest distances within S, over keep+1."""
    m = S.shape[0]
    out = np.empty(m, dtype=np.float64)
    step = max(1, _BLOCK // max(1, m))
    for lo in range(0, m, step):
        D = pairwise(S[lo:lo + step], S)
        if keep < m:
            D = np.partition(D, keep - 1, axis=1)[:, :keep]
        D.sort(axis=1)
        out[lo:lo + step] = D.sum(axis=1) / (keep + 1.0)
    return out
