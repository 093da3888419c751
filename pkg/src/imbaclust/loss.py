"""Size-normalized clustering losses.

Every loss partitions the data by nearest center and divides each cluster's
summed distance by a function of that cluster's size:

* fitting loss: ``sum_c  sum_{p in P_c} ||p - c|| / (|P_c| + 1)``
* relaxed loss: ``sum_c  sum_{p in P_c} ||p - c|| / log2(|P_c| + 1)**2``

Empty clusters contribute nothing. For weighted sets each distance is
multiplied by its point's weight, and the cluster size is either the member
count (``size_source="count"``) or the cluster's weight mass floored at 1
(``size_source="mass"``, the default; coreset weights estimate cardinalities).

``size_source="certified"`` additionally floors each cluster's size at its
member count and its weighted distance sum at the unweighted one. Every row
of a (merged) coreset is a distinct data point, so these are lower bounds the
true cluster is known to satisfy; they stop a minimizer from chasing clusters
whose negative weights push the estimate below zero.
"""
from __future__ import annotations

from typing import Literal

import numpy as np

from .core import as_points, as_weighted, assign

SizeSource = Literal["mass", "count", "certified"]
Objective = Literal["relaxed", "fitting"]


def size_divisor(sizes, objective: Objective = "relaxed") -> np.ndarray:
    sizes = np.asarray(sizes, dtype=np.float64)
    if objective == "fitting":
        return sizes + 1.0
    if objective == "relaxed":
        lg = np.log2(sizes + 1.0)
        return lg * lg
    raise ValueError(f"unknown objective {objective!r}")


def _cluster_loss(D, C, objective: Objective, size_source: SizeSource) -> float:
    D = as_weighted(D)
    a = assign(D, C)
    m = a.n_centers
    sums = np.bincount(a.labels, weights=D.weights * a.distances, minlength=m)
    if size_source == "count":
        sizes = a.sizes.astype(np.float64)
    elif size_source == "mass":
        sizes = np.maximum(a.masses, 1.0)
    elif size_source == "certified":
        sizes = np.maximum(a.masses, a.sizes)
        sums = np.maximum(sums, np.bincount(a.labels, weights=a.distances, minlength=m))
    else:
        raise ValueError(f"unknown size_source {size_source!r}")
    nonempty = a.sizes > 0
    total = 0.0
    for c in np.flatnonzero(nonempty):
        total += sums[c] / size_divisor(sizes[c], objective)
    return float(total)


def fitting_loss(P, C) -> float:
    """Sum over clusters of summed distance divided by (cluster size + 1)."""
    return _cluster_loss(as_points(P), C, "fitting", "count")


def relaxed_loss(P, C) -> float:
    """Sum over clusters of summed distance divided by log2(cluster size + 1)**2."""
    return _cluster_loss(as_points(P), C, "relaxed", "count")


def weighted_relaxed_loss(D, C, size_source: SizeSource = "mass") -> float:
    """Relaxed loss of a weighted set; negative weights are allowed.

    With unit weights this equals :func:`relaxed_loss` bit for bit under
    either `size_source`.
    """
    return _cluster_loss(D, C, "relaxed", size_source)


def weighted_loss(D, C, objective: Objective = "relaxed", size_source: SizeSource = "mass") -> float:
    """Either objective on a weighted set."""
    return _cluster_loss(D, C, objective, size_source)


def variance_loss(P, labels) -> float:
    """Sum over nonempty clusters of the population variance around the centroid.

    `labels` is a per-point label array or an :class:`~imbaclust.core.Assignment`.
    """
    P = as_points(P)
    labels = np.asarray(getattr(labels, "labels", labels)).reshape(-1)
    if labels.shape[0] != P.shape[0]:
        raise ValueError(f"{labels.shape[0]} labels for {P.shape[0]} points")
    if P.shape[0] == 0:
        raise ValueError("need at least one nonempty cluster")
    total = 0.0
    for lab in np.unique(labels):
        X = P[labels == lab]
        dev = X - X.mean(axis=0)
        total += float((dev * dev).sum(axis=1).mean())
    return total
