"""Compiled against pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints best-of-``repeat`` wall time per call for each backend, the speedup,
and the max abs difference between the two outputs.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from nippas import _kernels_py
from nippas.basis import graded_lex_indices

try:
    from nippas import _kernels
except ImportError:
    _kernels = None


def vandermonde_case(n_points=2000, n_basis=100, dim=2):
    rng = np.random.default_rng(0)
    Z = rng.random((n_points, dim)) * 2 * np.pi
    idx = np.array(graded_lex_indices(dim, n_basis), dtype=np.int64)
    lo, hi = np.zeros(dim), np.full(dim, 2 * np.pi)
    return "cheb_vandermonde", (Z, idx, lo, hi)


def rusanov_case(n_batch=16, n_cells=500, n_steps=400):
    dx = 2.0 / n_cells
    x = -1.0 + dx * (np.arange(n_cells) + 0.5)
    h = np.where(x <= 0.0, 1.0, 0.5)[None, :].repeat(n_batch, axis=0)
    q = np.zeros_like(h)
    g = np.full(n_batch, 9.81)
    return "rusanov_march", (h, q, g, 0.3 * dx / 6.0, dx, n_steps)


def bench(name, args, repeat):
    out = {}
    for label, mod in (("cython", _kernels), ("python", _kernels_py)):
        if mod is None:
            continue
        fn = getattr(mod, name)
        copy = lambda: tuple(a.copy() if isinstance(a, np.ndarray) else a for a in args)
        res = fn(*copy())
        t = min(timeit.repeat(lambda: fn(*copy()), number=1, repeat=repeat))
        out[label] = (t, res)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':<18}{'cython [s]':>12}{'python [s]':>12}{'speedup':>9}{'max diff':>11}")
    for name, a in (vandermonde_case(), rusanov_case()):
        r = bench(name, a, args.repeat)
        tp = r["python"][0]
        if "cython" in r:
            tc = r["cython"][0]
            ra, rb = r["cython"][1], r["python"][1]
            ra = ra if isinstance(ra, tuple) else (ra,)
            rb = rb if isinstance(rb, tuple) else (rb,)
            diff = max(float(np.max(np.abs(np.asarray(x) - np.asarray(y)))) for x, y in zip(ra, rb))
            print(f"{name:<18}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}{diff:>11.1e}")
        else:
            print(f"{name:<18}{'-':>12}{tp:>12.4f}{'-':>9}{'-':>11}")


if __name__ == "__main__":
    main()
