import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from imbaclust.core import WeightedSet
from imbaclust.loss import (fitting_loss, relaxed_loss, variance_loss, weighted_loss,
                            weighted_relaxed_loss)
from oracles import naive_loss


def test_fitting_examples():
    assert fitting_loss([0, 2], [0]) == pytest.approx(2 / 3, rel=1e-15)
    assert fitting_loss([[1, 2]], [[1, 2]]) == 0.0
    assert fitting_loss([0, 1, 3, 10], [1, 10]) == pytest.approx(0.75, rel=1e-15)


def test_relaxed_examples():
    expected = 2 / math.log2(3) ** 2
    assert relaxed_loss([0, 2], [0]) == pytest.approx(expected, rel=1e-15)
    assert expected == pytest.approx(0.796145, abs=1e-6)
    P = np.random.default_rng(0).normal(size=(5, 2))
    assert relaxed_loss(P, P) == 0.0
    assert relaxed_loss([0, 1, 3, 10], [1, 10]) == pytest.approx(0.75, rel=1e-15)


def test_empty_center_set_rejected():
    for fn in (fitting_loss, relaxed_loss):
        with pytest.raises(ValueError):
            fn([[0.0]], np.empty((0, 1)))


def test_weighted_unit_equals_unweighted():
    rng = np.random.default_rng(2)
    P = rng.normal(size=(60, 3))
    C = rng.normal(size=(4, 3))
    for mode in ("mass", "count", "certified"):
        assert weighted_relaxed_loss(WeightedSet.unit(P), C, mode) == relaxed_loss(P, C)


def test_weighted_count_mode_is_linear():
    rng = np.random.default_rng(4)
    D = WeightedSet(rng.normal(size=(30, 2)), rng.normal(size=30))
    C = rng.normal(size=(3, 2))
    base = weighted_relaxed_loss(D, C, "count")
    scaled = WeightedSet(D.points, 2.5 * D.weights)
    assert weighted_relaxed_loss(scaled, C, "count") == pytest.approx(2.5 * base, rel=1e-12)


def test_weighted_matches_oracle_with_negative_weights():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(2, 15))
        D = WeightedSet(rng.normal(size=(n, 2)), rng.normal(0.5, 2.0, size=n))
        C = rng.normal(size=(int(rng.integers(1, 4)), 2))
        for mode in ("mass", "count"):
            for obj in ("relaxed", "fitting"):
                got = weighted_loss(D, C, obj, mode)
                want = naive_loss(D.points, C, D.weights, obj, mode)
                assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_certified_floors():
    # one cluster, negative total weight: size floored at the count and the
    # weighted sum at the unweighted one
    D = WeightedSet([[1.0], [3.0]], [-4.0, 1.0])
    got = weighted_relaxed_loss(D, [[0.0]], "certified")
    assert got == pytest.approx(4.0 / math.log2(3) ** 2, rel=1e-15)
    assert weighted_relaxed_loss(D, [[0.0]], "mass") == pytest.approx(-1.0, rel=1e-15)


def test_unknown_size_source():
    with pytest.raises(ValueError):
        weighted_relaxed_loss(WeightedSet.unit([[0.0]]), [[0.0]], "bogus")


def test_variance_examples():
    assert variance_loss([0, 2, 10], [0, 0, 1]) == pytest.approx(1.0, rel=1e-15)
    assert variance_loss([[0, 0], [1, 1], [5, 5]], [0, 1, 2]) == 0.0
    assert variance_loss([[-1, 0], [1, 0]], [7, 7]) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(ValueError):
        variance_loss([0, 1], [0])


pts = st.integers(2, 30).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**32 - 1)))


@settings(max_examples=50, deadline=None)
@given(pts, st.floats(0.1, 10), st.floats(0, 2 * math.pi))
def test_rigid_motion_and_scaling(case, alpha, theta):
    n, seed = case
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(n, 2))
    C = rng.normal(size=(3, 2))
    R = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    shift = rng.normal(size=2)
    for fn in (fitting_loss, relaxed_loss):
        base = fn(P, C)
        assert fn(P @ R.T + shift, C @ R.T + shift) == pytest.approx(base, rel=1e-9, abs=1e-12)
        assert fn(alpha * P, alpha * C) == pytest.approx(alpha * base, rel=1e-9, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(pts)
def test_relaxed_sandwich_and_duplicate_center(case):
    n, seed = case
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(n, 2))
    C = rng.normal(size=(int(rng.integers(1, 4)), 2))
    total = float(np.min(np.linalg.norm(P[:, None] - C[None], axis=2), axis=1).sum())
    lr = relaxed_loss(P, C)
    assert lr <= total * (1 + 1e-12)
    # every cluster has at most n points, so the divisor is at most log2(n + 1)**2
    assert total <= math.log2(n + 1) ** 2 * lr * (1 + 1e-12)
    dup = np.vstack((C, C[:1]))
    assert fitting_loss(P, dup) <= fitting_loss(P, C) * (1 + 1e-12)
    assert relaxed_loss(P, dup) <= lr * (1 + 1e-12)
