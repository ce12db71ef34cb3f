"""Benchmark the counting kernel under both backends.

The kernel walks q^nvars tuples, evaluates the Cox relation through field
tables, and histograms solutions by vanishing pattern.  Usage:

    python benchmarks/bench_kernels.py [--big]

--big adds a 40M-point instance (a few seconds under numba, noticeably
slower on the blocked-numpy path).
"""

import argparse
import time

import numpy as np

from maninlab._kernels import _pattern_counts_numba, _pattern_counts_numpy
from maninlab.counts import relation_exponents
from maninlab.fields import field_for_order
from maninlab.varieties import builtin_dp6a2, builtin_xn


def instances(big: bool):
    out = [
        ("xn:3, q=5 (5^7 = 78k)", builtin_xn(3), 5),
        ("xn:4, q=4 (4^9 = 262k)", builtin_xn(4), 4),
        ("xn:4, q=5 (5^9 = 1.95M)", builtin_xn(4), 5),
        ("dp6a2, q=8 (8^7 = 2.1M)", builtin_dp6a2(), 8),
    ]
    if big:
        out.append(("xn:4, q=7 (7^9 = 40M)", builtin_xn(4), 7))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--big", action="store_true")
    args = ap.parse_args()

    try:
        import numba  # noqa: F401
        have_numba = True
    except ImportError:
        have_numba = False

    print(f"{'instance':36} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for name, v, q in instances(args.big):
        F = field_for_order(q)
        exps = np.ascontiguousarray(relation_exponents(v))
        mul = np.ascontiguousarray(F.mul_table())
        add = np.ascontiguousarray(F.add_table())
        nv = len(v.vars)

        t0 = time.perf_counter()
        a = _pattern_counts_numpy(q, mul, add, exps, nv)
        t_np = time.perf_counter() - t0

        if have_numba:
            _pattern_counts_numba(q, mul, add, exps, nv)  # warm the JIT
            t0 = time.perf_counter()
            b = _pattern_counts_numba(q, mul, add, exps, nv)
            t_nb = time.perf_counter() - t0
            assert (a == b).all(), "backend mismatch"
            print(f"{name:36} {t_np:9.3f}s {t_nb:9.3f}s {t_np / t_nb:8.1f}x")
        else:
            print(f"{name:36} {t_np:9.3f}s {'n/a':>10} {'n/a':>9}")


if __name__ == "__main__":
    main()
