"""Imbalanced point clustering with size-normalized losses.

Exhaustive approximation, bi-criteria centers from robust medians, and a
sensitivity-sampling coreset, plus pipelines built from them.
"""
from importlib.metadata import PackageNotFoundError, version as _version

from ._backend import set_backend
from .approx import EnumerationTooLarge, exhaustive_approx, exhaustive_approx_indices
from .bicriteria import BiCriteriaParams, bicriteria, closest, robust_median_of_sample
from .core import Assignment, WeightedSet, assign, euclidean_dist, read_csv, write_csv
from .coreset import Coreset, CoresetParams, build_coreset, load_coreset, sensitivities
from .datagen import DiscSpec, make_preset, sample_disc
from .kmeanspp import best_of_kmeanspp, dsquared_seed, kmeans, lloyd_refine
from .loss import fitting_loss, relaxed_loss, variance_loss, weighted_loss, weighted_relaxed_loss
from .metrics import silhouette, v_measure
from .pipeline import ClusterTree, approx_on_coreset, choice_cluster, divisive_tree
from .quantize import Divisive, Flat, quantize

try:
    __version__ = _version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"
