"""Compiled vs numpy kernels: agreement and wall time.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from magweyl import _kernels_py

try:
    from magweyl import _kernels
except ImportError:  # extension not built
    _kernels = None


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases(rng):
    P = 400
    Yc = rng.uniform(-3, 3, (P, 4))
    Zc = rng.uniform(-3, 3, (P, 4))
    fy = rng.normal(size=P) + 1j * rng.normal(size=P)
    gz = rng.normal(size=P) + 1j * rng.normal(size=P)
    Xs = rng.uniform(-1, 1, (8, 4))
    yield "direct_moyal_affine", (Xs, Yc, fy, Zc, gz, 2, 1.0, np.array([0.2, -0.1]))
    shape = (6, 6)
    F = rng.normal(size=(36, 36)) + 1j * rng.normal(size=(36, 36))
    G = rng.normal(size=(36, 36)) + 1j * rng.normal(size=(36, 36))
    yield "crossed_product_dense", (F, G, shape)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':24s} {'python [s]':>11s} {'compiled [s]':>13s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, inp in cases(rng):
        tp, ref = _time(lambda: getattr(_kernels_py, name)(*inp), args.repeat)
        if _kernels is None:
            print(f"{name:24s} {tp:11.4f} {'n/a':>13s}")
            continue
        tc, out = _time(lambda: getattr(_kernels, name)(*inp), args.repeat)
        err = np.abs(out - ref).max() / np.abs(ref).max()
        print(f"{name:24s} {tp:11.4f} {tc:13.4f} {tp / tc:8.1f} {err:13.2e}")


if __name__ == "__main__":
    main()
