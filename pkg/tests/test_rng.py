import numpy as np

from imbaclust.rng import child_seed, derive, make_rng


def test_make_rng_passthrough():
    g = np.random.default_rng(0)
    assert make_rng(g) is g
    assert make_rng(5).random() == make_rng(5).random()


def test_derived_streams():
    a = derive(7, "round:0").random(4)
    assert np.array_equal(a, derive(7, "round:0").random(4))
    assert not np.array_equal(a, derive(7, "round:1").random(4))
    assert not np.array_equal(a, derive(8, "round:0").random(4))
    assert not np.array_equal(derive(7, "a", "b").random(4), derive(7, "b", "a").random(4))


def test_child_seed_deterministic():
    assert child_seed(make_rng(3)) == child_seed(make_rng(3))
    assert 0 <= child_seed(make_rng(4)) < 2**63
