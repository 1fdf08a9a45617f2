"""Compare the numba and numpy backends on the two hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Each case is run once per backend to warm up (numba compiles on first call),
then timed; results from both backends are checked for equality.
"""

import argparse
import time

import numpy as np

from wittcenter import _kernels
from wittcenter.sampling import random_weyl
from wittcenter.weyl import WeylElement, weyl_mul, weyl_pow


def weyl_case(p, level, d, deg, terms):
    rng = np.random.default_rng(1)
    u = random_weyl(rng, p, level, d, deg, terms)
    v = random_weyl(rng, p, level, d, deg, terms)
    return f"weyl_mul p={p} n={level} d={d} deg={deg}", lambda b: weyl_mul(u, v, backend=b)


def power_case(p, level, power):
    x2d2 = WeylElement.from_terms(p, level, 1, {(2, 2): 1})

    def run(b):
        _kernels.set_backend(b)
        return weyl_pow(x2d2 + WeylElement.x(p, level, 1, 0), power)

    return f"weyl_pow (x^2d^2 + x)^{power} p={p} n={level}", run


def howell_case(p, k, rows, cols):
    rng = np.random.default_rng(2)
    A = rng.integers(0, p**k, size=(rows, cols)) * (rng.random((rows, cols)) < 0.3)
    return f"howell p={p} k={k} {rows}x{cols}", lambda b: _kernels.howell_inplace(A, p, k, backend=b)


def timed(fn, backend, repeat):
    fn(backend)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    cases = [
        weyl_case(3, 1, 1, 12, 6),
        weyl_case(3, 2, 2, 8, 8),
        weyl_case(2, 3, 2, 10, 8),
        power_case(3, 2, 9),
        power_case(2, 2, 8),
        howell_case(3, 2, 60, 80),
        howell_case(2, 3, 120, 150),
    ]
    saved = _kernels.get_backend()
    print(f"{'case':44s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    try:
        for name, fn in cases:
            t_np, out_np = timed(fn, "numpy", args.repeat)
            t_nb, out_nb = timed(fn, "numba", args.repeat)
            assert same(out_np, out_nb), f"backends disagree on {name}"
            print(f"{name:44s} {1e3 * t_np:10.2f} {1e3 * t_nb:10.2f} {t_np / t_nb:8.1f}x")
    finally:
        _kernels.set_backend(saved)


if __name__ == "__main__":
    main()
