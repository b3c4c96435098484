"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--n 16] [--repeat 5]

The first numba call includes compilation and is reported separately.
"""

import argparse
import time

import numpy as np

from matroidkit import _kernels as K
from matroidkit import families as F
from matroidkit.fields import gf


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(n):
    rng = np.random.default_rng(0)
    f = gf(5)
    cols = rng.integers(0, 5, size=(n, n // 2))
    masks = np.arange(1 << n, dtype=np.int64)
    us, vs = rng.integers(0, n // 2, n), rng.integers(0, n // 2, n)
    swirl = F.free_swirl(min(n // 2, 8))
    lo = swirl.mask(["p1", "q1"])
    free = swirl.full ^ lo ^ swirl.mask(["p3", "q3"])
    yield "linear_ranks", lambda b: K.linear_ranks(cols, masks, f, b)
    yield "graph_ranks", lambda b: K.graph_ranks(us, vs, n // 2, masks, False, b)
    yield "bicircular_ranks", lambda b: K.graph_ranks(us, vs, n // 2, masks, True, b)
    yield "min_conn", lambda b: K.min_conn(swirl.table, lo, free, b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=16, help="ground-set size for the rank kernels")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not K.HAS_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")
    print(f"{'kernel':<18}{'numba 1st':>12}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for name, fn in cases(args.n):
        start = time.perf_counter()
        a = fn("numba")
        first = time.perf_counter() - start
        b = fn("numpy")
        assert np.array_equal(np.asarray(a), np.asarray(b)), name
        tn = best_of(lambda: fn("numba"), args.repeat)
        tp = best_of(lambda: fn("numpy"), args.repeat)
        print(f"{name:<18}{first:>12.4f}{tn:>12.4f}{tp:>12.4f}{tp / tn:>9.1f}x")


if __name__ == "__main__":
    main()
