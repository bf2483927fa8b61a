"""Compare the compiled and numpy pair-histogram kernels.

    python benchmarks/bench_kernels.py [--p 5 6 7] [--repeat 3]
"""
import argparse
import timeit

import numpy as np

from randchan import _pykernels
from randchan.symgroup import integer_partitions, permutation_array

try:
    from randchan import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def inputs(p):
    arr = np.ascontiguousarray(permutation_array(p))
    inv = np.ascontiguousarray(np.argsort(arr, axis=1).astype(np.int8))
    rng = np.random.default_rng(0)
    e = [rng.integers(0, p + 1, len(arr)).astype(np.int8) for _ in range(3)]
    shapes = tuple(integer_partitions(p))
    lookup = np.full((p + 1) ** p, -1, dtype=np.int16)
    for ci, s in enumerate(shapes):
        lookup[sum((p + 1) ** (r - 1) for r in s)] = ci
    return (arr, inv, *e, lookup, len(shapes))


def best(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, nargs="+", default=[5, 6, 7])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'p':>2} {'pairs':>12} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8}")
    for p in args.p:
        a = inputs(p)
        tp = best(_pykernels.pair_histogram, a, args.repeat)
        if _ckernels is None:
            print(f"{p:>2} {len(a[0]) ** 2:>12} {tp:>11.4f} {'n/a':>11} {'n/a':>8}")
            continue
        assert np.array_equal(_ckernels.pair_histogram(*a), _pykernels.pair_histogram(*a))
        tc = best(_ckernels.pair_histogram, a, args.repeat)
        print(f"{p:>2} {len(a[0]) ** 2:>12} {tp:>11.4f} {tc:>11.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
