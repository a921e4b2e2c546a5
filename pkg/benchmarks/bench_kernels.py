"""Compare the numba and numpy modular kernels.

Run with ``python3 benchmarks/bench_kernels.py``.  Both paths are called
explicitly, so the AXLAB_DISABLE_NUMBA flag only matters if numba itself is
missing (then the numba column is skipped).
"""
import argparse
import time

import numpy as np

from axlab import kernels
from axlab._accel import HAVE_NUMBA
from axlab.scalars.series import ring


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_conv(m, D, repeat, rng):
    p = kernels.PRIMES[0]
    r = ring(m, D)
    pi, pj, starts = r.pairs
    a = rng.integers(0, p, r.size, dtype=np.int64)
    b = rng.integers(0, p, r.size, dtype=np.int64)
    out = {}
    for name, flag in (("numpy", False), ("numba", True)):
        if flag and not HAVE_NUMBA:
            continue
        kernels.conv_mod(a, b, pi, pj, starts, p, numba=flag)  # warm up / compile
        out[name] = best_of(lambda: kernels.conv_mod(a, b, pi, pj, starts, p, numba=flag), repeat)
    if len(out) == 2:
        assert np.array_equal(kernels.conv_mod(a, b, pi, pj, starts, p, numba=False),
                              kernels.conv_mod(a, b, pi, pj, starts, p, numba=True))
    return f"conv m={m} D={D} (size {r.size})", out


def bench_rref(rows, cols, repeat, rng):
    p = kernels.PRIMES[0]
    mat = rng.integers(0, p, (rows, cols), dtype=np.int64)
    out = {}
    for name, flag in (("numpy", False), ("numba", True)):
        if flag and not HAVE_NUMBA:
            continue
        kernels.rref_mod(mat, p, numba=flag)
        out[name] = best_of(lambda: kernels.rref_mod(mat, p, numba=flag), repeat)
    if len(out) == 2:
        a, b = kernels.rref_mod(mat, p, numba=False), kernels.rref_mod(mat, p, numba=True)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    return f"rref {rows}x{cols}", out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    cases = [bench_conv(1, 96, args.repeat, rng), bench_conv(2, 12, args.repeat, rng),
             bench_conv(3, 8, args.repeat, rng), bench_rref(60, 80, args.repeat, rng),
             bench_rref(150, 200, args.repeat, rng), bench_rref(300, 350, args.repeat, rng)]
    print(f"{'case':32s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for label, t in cases:
        npy, nb = t.get("numpy"), t.get("numba")
        sp = f"{npy / nb:8.1f}" if nb else "     n/a"
        nbs = f"{nb * 1e3:10.3f}" if nb else "       n/a"
        print(f"{label:32s} {npy * 1e3:10.3f} {nbs} {sp}")


if __name__ == "__main__":
    main()
