#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py

The three hot loops are naive point counting, torsion counting and the
conic slot searches; everything else in the library is cold-path exact
arithmetic.  Unsolvable conics are the expensive case (full sweeps mod p^3);
solvable ones exit early on both backends.
"""

import time

from periodindex.kernels import pure

try:
    from periodindex.kernels import _fastcore as fast
except ImportError:
    fast = None


CASES = [
    ("count F_p, q ~ 1e4", "count_points_fp", (10007, 1, 0, 0, 2), 1),
    ("count F_p, q ~ 1e5", "count_points_fp", (100003, 1, 0, 0, 2), 1),
    ("count F_p, q ~ 1e6", "count_points_fp", (1000003, 1, 0, 0, 2), 1),
    ("9-torsion count, q = 73", "torsion_count_fp", (73, 0, -432, 9), 20),
    ("9-torsion count, q = 10007", "torsion_count_fp", (10007, 0, -432, 9), 1),
    ("conic sweep (unsolvable), p = 23", "conic_solvable_odd", (23, -5 * 23, 23), 3),
    ("conic sweep (unsolvable), p = 43", "conic_solvable_odd", (43, -5 * 43, 43), 1),
    ("conic early-exit (solvable), p = 97", "conic_solvable_odd", (3, 5, 97), 50),
    ("conic mod 64", "conic_solvable_two", (-7, -11), 200),
]


def run(mod, fn, args, reps):
    f = getattr(mod, fn)
    t0 = time.perf_counter()
    for _ in range(reps):
        result = f(*args)
    return (time.perf_counter() - t0) / reps, result


def main():
    print(f"{'case':38s} {'pure':>10s} {'compiled':>10s} {'speedup':>9s}")
    for label, fn, args, reps in CASES:
        tp, rp = run(pure, fn, args, reps)
        if fast is None:
            print(f"{label:38s} {tp * 1e3:9.2f}ms {'-':>10s} {'-':>9s}")
            continue
        tf, rf = run(fast, fn, args, reps)
        assert rp == rf, f"backend disagreement on {label}: {rp} != {rf}"
        print(f"{label:38s} {tp * 1e3:9.2f}ms {tf * 1e3:9.2f}ms {tp / tf:8.1f}x")
    if fast is None:
        print("\ncompiled backend not built; run `python setup.py build_ext --inplace`")


if __name__ == "__main__":
    main()
