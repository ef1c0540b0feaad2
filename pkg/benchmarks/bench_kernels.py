"""Time the compiled kernels against the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from lusinlp import _pykernels

try:
    from lusinlp import _ckernels
except ImportError:
    _ckernels = None


def cases(rng):
    n = 1500
    ts = np.sort(rng.random(n))
    vals = rng.normal(size=(n, 3))
    w = rng.random(3)
    deltas = np.array([2.0**-k for k in range(10, 0, -1)])
    stack = rng.normal(size=(40, 400, 3))
    m = 200_000
    u = rng.random(m) * 0.5
    v = u + rng.random(m) * 0.5
    a, b = rng.normal(size=m), rng.normal(size=m)
    return {
        "pair_modulus (1500 pts)": lambda k: k.pair_modulus(ts, vals, w, deltas),
        "pairwise_sup (40 x 400)": lambda k: k.pairwise_sup(stack, w),
        "affine_power_integral (2e5, p=2.5)": lambda k: k.affine_power_integral(u, v, a, b, 2.5),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':38s} {'numpy (ms)':>11s} {'cython (ms)':>12s} {'speedup':>8s}")
    for name, fn in cases(rng).items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        if _ckernels is None:
            print(f"{name:38s} {py:11.2f} {'n/a':>12s} {'':>8s}")
            continue
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:38s} {py:11.2f} {cy:12.2f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
