"""Composed clustering methods.

* :func:`approx_on_coreset` - exhaustive search run on a coreset instead of the data.
* :func:`choice_cluster` - run several clusterers, keep the best silhouette.
* :func:`divisive_tree` - top-down binary splitting to a fixed depth.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .approx import exhaustive_approx
from .bicriteria import BiCriteriaParams, bicriteria
from .core import WeightedSet, as_points, assign, nearest
from .coreset import CoresetParams, build_coreset
from .kmeanspp import dsquared_seed, kmeans
from .metrics import SilhouetteError, silhouette
from .rng import child_seed, derive, make_rng

DEFAULT_SAMPLE_SIZE = 1024


def approx_on_coreset(P, k: int, coreset_params: CoresetParams | None = None, rng=None,
                      objective: str = "relaxed", size_source: str = "certified") -> np.ndarray:
    """k centers from an exhaustive search over a coreset of P.

    Repeated draws are merged first, so every coreset row is a distinct data
    point and the ``certified`` size floors (see :mod:`imbaclust.loss`) hold.
    """
    P = as_points(P)
    if P.shape[0] < k:
        raise ValueError(f"need at least k={k} points, got n={P.shape[0]}")
    if coreset_params is None:
        coreset_params = CoresetParams(k=k)
    if P.shape[0] < 2:
        return P.copy()
    cs = build_coreset(P, coreset_params, rng).merged()
    if len(cs) < k:
        # every point sat on a seeded center; those centers are already optimal
        return cs.points.copy()
    return exhaustive_approx(cs.data, k, size_source=size_source, objective=objective)


def _bicriteria_two(P, k, rng):
    B = bicriteria(P, BiCriteriaParams(k=k), rng)
    if B.shape[0] <= k:
        return B
    # collapse B to k centers: exhaustive search over B weighted by cluster sizes
    a = assign(P, B)
    return exhaustive_approx(WeightedSet(B, a.sizes.astype(np.float64)), k, size_source="mass")


def run_method(method: str, P, k: int, rng=None, coreset_params: CoresetParams | None = None,
               bicriteria_params: BiCriteriaParams | None = None) -> np.ndarray:
    """Centers from one of the named methods.

    ``approx`` exhaustive search on the full data; ``approx-on-coreset`` (relaxed
    objective) and ``approx-on-coreset-fitting``; ``kmeans`` (seeding + Lloyd);
    ``kmeanspp`` (seeding only); ``bicriteria`` (full bi-criteria center set).
    """
    P = as_points(P)
    if method == "approx":
        return exhaustive_approx(P, k, size_source="count")
    if method == "approx-fitting":
        return exhaustive_approx(P, k, size_source="count", objective="fitting")
    if method == "approx-on-coreset":
        return approx_on_coreset(P, k, coreset_params or CoresetParams(k=k), rng)
    if method == "approx-on-coreset-fitting":
        return approx_on_coreset(P, k, coreset_params or CoresetParams(k=k), rng, objective="fitting")
    if method == "kmeans":
        return kmeans(P, k, rng)
    if method == "kmeanspp":
        return dsquared_seed(P, k, rng)
    if method == "bicriteria":
        return bicriteria(P, bicriteria_params or BiCriteriaParams(k=k), rng)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


METHODS = ("approx", "approx-fitting", "approx-on-coreset", "approx-on-coreset-fitting",
           "kmeans", "kmeanspp", "bicriteria")


@dataclass
class ChoiceResult:
    labels: np.ndarray
    centers: np.ndarray
    method: str
    score: float
    scores: dict


def choice_cluster(P, k: int, candidates=("approx-on-coreset", "kmeans"),
                   sample_size: int | None = DEFAULT_SAMPLE_SIZE, rng=None,
                   coreset_params: CoresetParams | None = None) -> ChoiceResult:
    """Run every candidate and keep the clustering with the highest mean silhouette.

    Candidates are method names (see :func:`run_method`) or callables
    ``f(P, k, rng) -> centers``. All candidates are scored on the same silhouette
    sample. Ties go to the earlier candidate; candidates that raise, or whose
    labels form a single cluster, are skipped.
    """
    P = as_points(P)
    if len(candidates) < 2:
        raise ValueError("choice clustering needs at least 2 candidates")
    if P.shape[0] < k:
        raise ValueError(f"need at least k={k} points, got n={P.shape[0]}")
    base = child_seed(make_rng(rng))
    best = None
    scores = {}
    errors = {}
    for i, cand in enumerate(candidates):
        tag = cand if isinstance(cand, str) else getattr(cand, "__name__", f"candidate{i}")
        stream = derive(base, f"candidate:{i}")
        try:
            if isinstance(cand, str):
                centers = run_method(cand, P, k, stream, coreset_params=coreset_params)
            else:
                centers = as_points(cand(P, k, stream), "centers")
            labels, _ = nearest(P, centers)
            score = silhouette(P, labels, sample_size, derive(base, "silhouette"))
        except (SilhouetteError, ValueError) as exc:
            errors[tag] = str(exc)
            continue
        scores[tag] = score
        if best is None or score > best.score:
            best = ChoiceResult(labels, centers, tag, score, scores)
    if best is None:
        raise RuntimeError(f"every candidate failed: {errors}")
    best.scores = scores
    return best


# ------------------------------------------------------------ divisive tree

SPLITTERS = ("approx-on-coreset", "kmeans", "bicriteria", "choice")


@dataclass
class TreeNode:
    path: str
    depth: int
    members: np.ndarray = field(repr=False)
    centers: np.ndarray | None = None
    children: list = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class ClusterTree:
    root: TreeNode
    n: int
    max_depth: int
    splitter: str

    def leaves(self) -> list[TreeNode]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def nodes(self) -> list[TreeNode]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(reversed(node.children))
        return out

    @property
    def labels(self) -> np.ndarray:
        """Leaf index per point, leaves numbered left to right."""
        lab = np.full(self.n, -1, dtype=np.int64)
        for i, leaf in enumerate(self.leaves()):
            lab[leaf.members] = i
        return lab

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "max_depth": self.max_depth,
            "splitter": self.splitter,
            "nodes": [
                {
                    "path": node.path,
                    "depth": node.depth,
                    "member_count": int(node.members.shape[0]),
                    "leaf": node.is_leaf,
                    "centers": None if node.centers is None else node.centers.tolist(),
                }
                for node in self.nodes()
            ],
        }

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)


def split_centers(splitter: str, X: np.ndarray, rng, coreset_params: CoresetParams | None = None,
                  sample_size: int | None = DEFAULT_SAMPLE_SIZE) -> np.ndarray:
    """Two centers splitting X according to `splitter`."""
    if splitter == "approx-on-coreset":
        return approx_on_coreset(X, 2, coreset_params or CoresetParams(k=2), rng)
    if splitter == "kmeans":
        return kmeans(X, 2, rng)
    if splitter == "bicriteria":
        return _bicriteria_two(X, 2, rng)
    if splitter == "choice":
        return choice_cluster(X, 2, ("approx-on-coreset", "kmeans"), sample_size, rng,
                              coreset_params=coreset_params).centers
    raise ValueError(f"unknown splitter {splitter!r}; expected one of {SPLITTERS}")


def divisive_tree(P, depth: int, splitter: str = "approx-on-coreset", rng=None,
                  coreset_params: CoresetParams | None = None,
                  sample_size: int | None = DEFAULT_SAMPLE_SIZE) -> ClusterTree:
    """Split every node in two until `depth` is reached or a node has < 2 points.

    A split that sends every member to one side (e.g. all points equal) makes
    the node a leaf. Node ``path`` strings are ``""`` for the root and append
    ``0``/``1`` per level; each node draws from its own stream ``node:<path>``.
    """
    P = as_points(P)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if splitter not in SPLITTERS:
        raise ValueError(f"unknown splitter {splitter!r}; expected one of {SPLITTERS}")
    base = child_seed(make_rng(rng))
    root = TreeNode("", 0, np.arange(P.shape[0]))
    stack = [root]
    while stack:
        node = stack.pop()
        if node.depth >= depth or node.members.shape[0] < 2:
            continue
        X = P[node.members]
        if np.all(X == X[0]):
            continue
        try:
            centers = split_centers(splitter, X, derive(base, f"node:{node.path}"),
                                    coreset_params, sample_size)
        except RuntimeError:
            continue
        labels, _ = nearest(X, centers)
        node.centers = centers
        sides = [node.members[labels == j] for j in range(centers.shape[0])]
        sides = [s for s in sides if s.shape[0] > 0]
        if len(sides) < 2:
            continue
        node.children = [TreeNode(node.path + str(j), node.depth + 1, s) for j, s in enumerate(sides)]
        stack.extend(node.children)
    return ClusterTree(root, P.shape[0], depth, splitter)
