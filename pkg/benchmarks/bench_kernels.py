"""Compare the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one row per kernel with the median wall time of each backend, the
speedup, and whether the two backends returned identical results.
"""
import argparse
import time

import numpy as np

from imbaclust._backend import _ckernels, _pykernels


def _median_time(fn, repeat):
    out = None
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times)), out


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.allclose(a, b, rtol=1e-12, atol=1e-12)
    if isinstance(a, float):
        return abs(a - b) <= 1e-12 * max(1.0, abs(a))
    return a == b


def cases():
    rng = np.random.default_rng(0)
    P = rng.normal(size=(20_000, 3))
    C = rng.normal(size=(8, 3))
    S = rng.normal(size=(2_000, 2))
    X = rng.normal(size=(60, 2))
    D = np.sqrt(((X[:, None] - X[None]) ** 2).sum(-1))
    w = np.ones(60)
    return [
        ("pairwise 20000x8", lambda k: k.pairwise(P, C)),
        ("nearest_center 20000x8", lambda k: k.nearest_center(P, C)),
        ("best_subset n=60 k=2", lambda k: k.best_subset(D, w, 2, False, 1)),
        ("best_subset n=60 k=3", lambda k: k.best_subset(D, w, 3, False, 1)),
        ("median_scores m=2000", lambda k: k.median_scores(S, 1000)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not available; build with `pip install -e .`")
        return 1
    print(f"{'kernel':<26}{'cython ms':>12}{'python ms':>12}{'speedup':>10}  equal")
    for name, fn in cases():
        tc, oc = _median_time(lambda: fn(_ckernels), args.repeat)
        tp, op = _median_time(lambda: fn(_pykernels), args.repeat)
        print(f"{name:<26}{tc * 1e3:>12.2f}{tp * 1e3:>12.2f}{tp / tc:>9.1f}x  {_same(oc, op)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
