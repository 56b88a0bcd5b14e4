"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_backends.py [--n 1000000] [--repeat 5]

Both backends are imported in-process; the first numba call is a warm-up so
compile time is excluded.
"""

import argparse
import time

import numpy as np

from sievelab import _backend
from sievelab.arith import make_g


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=1_000_000, help="dyadic scale N")
    p.add_argument("--q", type=int, default=1000, help="support bound of g")
    p.add_argument("--h", type=int, default=100, help="window half-width")
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if _backend.JIT is None:
        raise SystemExit("numba is not installed; nothing to compare")

    N, h = args.n, args.h
    g = make_g("moebius", args.q).scaled_array()
    size = 2 * N + 4 * h
    f = np.zeros(size, dtype=np.int64)
    _backend.NUMPY.sieve(f, 1, g)
    lags = np.arange(-3 * h, 3 * h + 1, dtype=np.int64)

    def tasks(b):
        out = np.zeros(size, dtype=np.int64)
        return {
            "sieve": lambda: b.sieve(out, 1, g),
            "windows": lambda: b.windows(f, 1, N, h),
            "correlations": lambda: b.correlations(f, 1, N, lags),
        }

    jit, np_ = tasks(_backend.JIT), tasks(_backend.NUMPY)
    for fn in jit.values():
        fn()
    print(f"N={N} Q={args.q} h={h} lags={len(lags)} best of {args.repeat}")
    print(f"{'kernel':14s}{'numba [s]':>12s}{'numpy [s]':>12s}{'speedup':>10s}")
    for name in jit:
        tj, tn = best_of(jit[name], args.repeat), best_of(np_[name], args.repeat)
        print(f"{name:14s}{tj:12.4f}{tn:12.4f}{tn / tj:10.2f}")


if __name__ == "__main__":
    main()
