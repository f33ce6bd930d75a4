#!/usr/bin/env python3
"""Compare the numba and numpy contraction kernels on evaluated state sums.

Usage:
    python benchmarks/bench_kernels.py [--repeat N]

For each case the plan is built once, both backends run on the same random
lane coefficients modulo a prime, and their outputs must agree exactly.
The first numba call (JIT compilation) is excluded from the timing.
"""

import argparse
import time

import numpy as np

from so3inv.jones import _link_key, _plan, _primes_for, borromean, figure8, trefoil, whitehead
from so3inv.kernels import HAVE_NUMBA, contract

CASES = [
    ("trefoil", trefoil(), (21,), 11),
    ("figure8", figure8(), (15,), 11),
    ("whitehead", whitehead(), (11, 11), 11),
    ("borromean", borromean(), (5, 5, 5), 7),
]


def time_backend(plan, coef, piv, p, backend, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = contract(plan, coef, piv, p, backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba unavailable (or disabled via SO3INV_DISABLE_NUMBA); only numpy is timed")
    rng = np.random.default_rng(0)
    print(f"{'case':<12}{'colors':<14}{'nnz':>9}{'numpy s':>11}{'numba s':>11}{'speedup':>9}")
    for name, link, colors, r in CASES:
        plan, entries, pivots = _plan(_link_key(link), colors)
        p, _ = _primes_for(r, 1)[0]
        lanes = r - 1
        coef = rng.integers(0, p, size=(len(entries), lanes), dtype=np.int64)
        piv = rng.integers(0, p, size=(len(pivots), lanes), dtype=np.int64)
        t_np, out_np = time_backend(plan, coef, piv, p, "numpy", args.repeat)
        if HAVE_NUMBA:
            contract(plan, coef, piv, p, "numba")  # compile
            t_nb, out_nb = time_backend(plan, coef, piv, p, "numba", args.repeat)
            assert np.array_equal(out_np, out_nb), f"backends disagree on {name}"
            speed = f"{t_np / t_nb:8.1f}x"
            nb = f"{t_nb:11.4f}"
        else:
            speed, nb = "     n/a", "        n/a"
        print(f"{name:<12}{str(colors):<14}{len(plan.src):>9}{t_np:11.4f}{nb}{speed}")


if __name__ == "__main__":
    main()
