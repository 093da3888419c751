"""Clustering quality metrics: silhouette (optionally sampled) and V-measure."""
from __future__ import annotations

import math

import numpy as np

from .core import as_points, pairwise_distances
from .rng import make_rng


class SilhouetteError(ValueError):
    """Fewer than two distinct labels among the scored points."""


def _silhouette_values(X: np.ndarray, labels: np.ndarray) -> np.ndarray:
    uniq, inv = np.unique(labels, return_inverse=True)
    if uniq.shape[0] < 2:
        raise SilhouetteError("silhouette needs at least 2 distinct labels")
    n, m = X.shape[0], uniq.shape[0]
    counts = np.bincount(inv, minlength=m).astype(np.float64)
    # per point: summed distance to every cluster, accumulated in row blocks
    sums = np.empty((n, m))
    step = max(1, (1 << 22) // max(1, n))
    onehot = np.zeros((n, m))
    onehot[np.arange(n), inv] = 1.0
    for lo in range(0, n, step):
        sums[lo:lo + step] = pairwise_distances(X[lo:lo + step], X) @ onehot
    own = counts[inv]
    a = np.where(own > 1, sums[np.arange(n), inv] / np.maximum(own - 1, 1), 0.0)
    means = sums / counts
    means[np.arange(n), inv] = np.inf
    b = means.min(axis=1)
    denom = np.maximum(a, b)
    s = np.where(denom > 0, (b - a) / np.where(denom > 0, denom, 1.0), 0.0)
    return np.where(own > 1, s, 0.0)


def silhouette_samples(P, labels) -> np.ndarray:
    """Per-point silhouette values; singleton clusters score 0."""
    P = as_points(P)
    labels = np.asarray(labels).reshape(-1)
    if labels.shape[0] != P.shape[0]:
        raise ValueError(f"{labels.shape[0]} labels for {P.shape[0]} points")
    return _silhouette_values(P, labels)


def silhouette(P, labels, sample_size: int | None = None, rng=None) -> float:
    """Mean silhouette over all points, or over a uniform subsample.

    With `sample_size` set, ``min(sample_size, n)`` points are drawn without
    replacement and scored among themselves. If that sample holds fewer than
    two labels the score is recomputed on the full set.
    """
    P = as_points(P)
    labels = np.asarray(labels).reshape(-1)
    if labels.shape[0] != P.shape[0]:
        raise ValueError(f"{labels.shape[0]} labels for {P.shape[0]} points")
    if np.unique(labels).shape[0] < 2:
        raise SilhouetteError("silhouette needs at least 2 distinct labels")
    n = P.shape[0]
    if sample_size is not None and sample_size < n:
        idx = make_rng(rng).choice(n, size=sample_size, replace=False)
        try:
            return float(_silhouette_values(P[idx], labels[idx]).mean())
        except SilhouetteError:
            pass
    return float(_silhouette_values(P, labels).mean())


def _entropy(counts: np.ndarray) -> float:
    total = counts.sum()
    p = counts[counts > 0] / total
    return float(-(p * np.log(p)).sum())


def v_measure(true_labels, pred_labels) -> float:
    """Harmonic mean of homogeneity and completeness (natural-log entropies)."""
    t = np.asarray(true_labels).reshape(-1)
    p = np.asarray(pred_labels).reshape(-1)
    if t.shape[0] != p.shape[0]:
        raise ValueError(f"length mismatch: {t.shape[0]} vs {p.shape[0]}")
    if t.shape[0] == 0:
        raise ValueError("need at least one point")
    tu, ti = np.unique(t, return_inverse=True)
    pu, pi = np.unique(p, return_inverse=True)
    if tu.shape[0] == 1 and pu.shape[0] == 1:
        return 1.0
    n = t.shape[0]
    cont = np.zeros((tu.shape[0], pu.shape[0]))
    np.add.at(cont, (ti, pi), 1.0)
    h_t = _entropy(cont.sum(axis=1))
    h_p = _entropy(cont.sum(axis=0))
    nz = cont > 0
    joint = cont[nz] / n
    # conditional entropies H(T|P) and H(P|T) from the contingency table
    h_t_given_p = float(-(joint * np.log(cont[nz] / cont.sum(axis=0)[np.nonzero(nz)[1]])).sum())
    h_p_given_t = float(-(joint * np.log(cont[nz] / cont.sum(axis=1)[np.nonzero(nz)[0]])).sum())
    homogeneity = 1.0 if h_t == 0 else 1.0 - h_t_given_p / h_t
    completeness = 1.0 if h_p == 0 else 1.0 - h_p_given_t / h_p
    if homogeneity + completeness == 0:
        return 0.0
    return 2.0 * homogeneity * completeness / (homogeneity + completeness)


def separates(pred_labels, true_labels, target) -> bool:
    """True when the points of class `target` form exactly one predicted cluster."""
    pred = np.asarray(pred_labels).reshape(-1)
    true = np.asarray(true_labels).reshape(-1)
    inside = pred[true == target]
    if inside.shape[0] == 0:
        return False
    first = inside[0]
    return bool(np.all(inside == first) and not np.any(pred[true != target] == first))
