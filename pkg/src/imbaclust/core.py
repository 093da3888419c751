"""Point containers, Euclidean geometry and nearest-center assignment.

Point sets are plain ``float64`` arrays of shape ``(n, d)``; row index is the
point's identity. A :class:`WeightedSet` pairs such an array with real
(possibly negative) per-point weights.

Tie rule used throughout the package: when several centers are equally close,
the one with the lowest index wins.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from . import _backend


def as_points(P, name: str = "points") -> np.ndarray:
    """Validate and convert to a C-contiguous ``(n, d)`` float64 array."""
    arr = np.ascontiguousarray(np.asarray(P, dtype=np.float64))
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D (n, d), got shape {arr.shape}")
    if arr.shape[1] < 1:
        raise ValueError(f"{name} must have dimension d >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


@dataclass(frozen=True)
class WeightedSet:
    """Points with real per-point weights (the coreset output type)."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = as_points(self.points)
        w = np.ascontiguousarray(np.asarray(self.weights, dtype=np.float64).reshape(-1))
        if w.shape[0] != pts.shape[0]:
            raise ValueError(f"{w.shape[0]} weights for {pts.shape[0]} points")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        pts.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def unit(cls, P) -> "WeightedSet":
        P = as_points(P)
        return cls(P, np.ones(P.shape[0]))

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())


def as_weighted(D) -> WeightedSet:
    if isinstance(D, WeightedSet):
        return D
    return WeightedSet.unit(D)


@dataclass(frozen=True)
class Assignment:
    """Nearest-center partition of a (weighted) point set.

    ``labels[i]`` is the center index of point i, ``distances[i]`` its
    distance to that center. ``clusters``, ``sizes`` and ``masses`` are
    indexed by center.
    """

    labels: np.ndarray
    distances: np.ndarray
    sizes: np.ndarray
    masses: np.ndarray
    clusters: list = field(repr=False)

    @property
    def n_centers(self) -> int:
        return self.sizes.shape[0]


def euclidean_dist(p, q) -> float:
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    q = np.asarray(q, dtype=np.float64).reshape(-1)
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.shape[0]} vs {q.shape[0]}")
    diff = p - q
    return float(np.sqrt((diff * diff).sum()))


def pairwise_distances(P, Q) -> np.ndarray:
    """Euclidean distance matrix, ``out[i, j] = ||P[i] - Q[j]||``."""
    P, Q = as_points(P), as_points(Q)
    if P.shape[1] != Q.shape[1]:
        raise ValueError(f"dimension mismatch: {P.shape[1]} vs {Q.shape[1]}")
    return _backend.kernels.pairwise(P, Q)


def nearest(P, C):
    """Labels and distances of each point's nearest center (lowest index on ties)."""
    P, C = as_points(P), as_points(C, "centers")
    if C.shape[0] == 0:
        raise ValueError("center set is empty")
    if P.shape[1] != C.shape[1]:
        raise ValueError(f"dimension mismatch: points d={P.shape[1]}, centers d={C.shape[1]}")
    if P.shape[0] == 0:
        return np.empty(0, dtype=np.int64), np.empty(0)
    return _backend.kernels.nearest_center(P, C)


def assign(P, C) -> Assignment:
    """Map every point to its nearest center; empty clusters are allowed.

    `P` may be a plain point array (unit weights) or a :class:`WeightedSet`.
    """
    D = as_weighted(P)
    C = as_points(C, "centers")
    labels, dist = nearest(D.points, C)
    m = C.shape[0]
    sizes = np.bincount(labels, minlength=m)
    masses = np.bincount(labels, weights=D.weights, minlength=m)
    order = np.argsort(labels, kind="stable")
    bounds = np.concatenate(([0], np.cumsum(sizes)))
    clusters = [order[bounds[c]:bounds[c + 1]] for c in range(m)]
    return Assignment(labels=labels, distances=dist, sizes=sizes, masses=masses, clusters=clusters)


# ---------------------------------------------------------------- CSV I/O

def _looks_like_header(row) -> bool:
    for cell in row:
        try:
            float(cell)
        except ValueError:
            return True
    return False


def read_csv(path, header: bool | None = None, weighted: bool = False, labeled: bool = False):
    """Read points from CSV, one point per row.

    With ``header=None`` the first row is treated as a header when any cell is
    non-numeric. A named ``weight`` / ``label`` column is picked up
    automatically from a header; otherwise `weighted` / `labeled` say whether
    the trailing column(s) carry them (order: coords, weight, label).

    Returns ``(points, weights or None, labels or None)``.
    """
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    names = None
    if rows and (header or (header is None and _looks_like_header(rows[0]))):
        names = [c.strip().lower() for c in rows[0]]
        rows = rows[1:]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    data = np.array([[float(c) for c in r] for r in rows], dtype=np.float64)
    ncol = data.shape[1]
    w_col = l_col = None
    if names is not None:
        w_col = names.index("weight") if "weight" in names else None
        l_col = names.index("label") if "label" in names else None
    else:
        tail = ncol
        if labeled:
            tail -= 1
            l_col = tail
        if weighted:
            tail -= 1
            w_col = tail
    coord_cols = [j for j in range(ncol) if j not in (w_col, l_col)]
    points = as_points(data[:, coord_cols])
    weights = data[:, w_col].copy() if w_col is not None else None
    labels = data[:, l_col].astype(np.int64) if l_col is not None else None
    return points, weights, labels


def write_csv(path, points, weights=None, labels=None, header: bool = True) -> None:
    """Write points (plus optional weight and label columns) as CSV."""
    P = as_points(points)
    cols = [P]
    names = [f"x{j}" for j in range(P.shape[1])]
    fmts = ["%.17g"] * P.shape[1]
    if weights is not None:
        cols.append(np.asarray(weights, dtype=np.float64).reshape(-1, 1))
        names.append("weight")
        fmts.append("%.17g")
    if labels is not None:
        cols.append(np.asarray(labels).reshape(-1, 1))
        names.append("label")
        fmts.append("%d")
    table = np.hstack([c.astype(np.float64) for c in cols])
    np.savetxt(path, table, delimiter=",", fmt=fmts,
               header=",".join(names) if header else "", comments="")


def read_weighted_csv(path, header: bool | None = None) -> WeightedSet:
    points, weights, _ = read_csv(path, header=header, weighted=True)
    if weights is None:
        weights = np.ones(points.shape[0])
    return WeightedSet(points, weights)
