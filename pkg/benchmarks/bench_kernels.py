#!/usr/bin/env python3
"""Time the hot kernels on every available backend (numba vs pure numpy).

Usage:
    python benchmarks/bench_kernels.py [--sizes 8,12,16,20] [--repeats 3] [--batch 2000]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from multiport import kernels


def _random_complex(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)


def _time_best(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="8,12,16,20",
                        help="comma-separated permanent sizes")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--batch", type=int, default=2000,
                        help="batch length for the batched kernels (6x6 matrices)")
    args = parser.parse_args()
    sizes = [int(tok) for tok in args.sizes.split(",")]

    rng = np.random.default_rng(1)
    backends = list(kernels.BACKENDS)
    print(f"backends: {backends} (active: {kernels.active_backend()})")

    print(f"\n{'kernel':<28}" + "".join(f"{b:>12}" for b in backends))
    for n in sizes:
        a = _random_complex(rng, n)
        row = []
        for b in backends:
            impl = kernels.BACKENDS[b]["permanent"]
            impl(a[:2, :2])  # warm/JIT
            row.append(_time_best(lambda: impl(a), args.repeats))
        ref = kernels.BACKENDS[backends[0]]["permanent"](a)
        for b in backends[1:]:
            dev = abs(kernels.BACKENDS[b]["permanent"](a) - ref)
            assert dev <= 1e-8 * max(1.0, abs(ref)), f"backend mismatch at n={n}: {dev}"
        print(f"{'permanent %2dx%-2d' % (n, n):<28}" + "".join(f"{t:>11.4f}s" for t in row))

    mats = np.stack([_random_complex(rng, 6) for _ in range(args.batch)])
    for kernel in ("batch_permanent", "batch_determinant"):
        row = []
        for b in backends:
            impl = kernels.BACKENDS[b][kernel]
            impl(mats[:2])
            row.append(_time_best(lambda: impl(mats), args.repeats))
        print(f"{f'{kernel} {args.batch}x6x6':<28}" + "".join(f"{t:>11.4f}s" for t in row))

    dr = np.sort(rng.integers(1, 9, size=8)).astype(np.int64)
    ds = np.sort(rng.integers(1, 9, size=8)).astype(np.int64)
    perms, parity = kernels.permutation_table(8)
    row = []
    for b in backends:
        impl = kernels.BACKENDS[b]["phase_counts"]
        impl(dr[:3], ds[:3], 8, *kernels.permutation_table(3))
        row.append(_time_best(lambda: impl(dr, ds, 8, perms, parity), args.repeats))
    print(f"{'phase_counts N=8 (40320)':<28}" + "".join(f"{t:>11.4f}s" for t in row))


if __name__ == "__main__":
    main()
