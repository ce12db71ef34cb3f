"""Hot counting kernels: relation solutions binned by exact vanishing pattern.

The one kernel that dominates runtime walks all q^nvars coordinate tuples,
evaluates the Cox relation through field tables, and increments a counter
indexed by the bitmask of vanishing coordinates.  Everything downstream
(torsor counts, open-stratum counts, local densities, bilinear counts) is a
cheap transform of that histogram.

Backend selection: MANINLAB_BACKEND = auto | numba | numpy (default auto:
numba when importable, else the blocked numpy path).  Both paths are exact
integer arithmetic and return identical arrays.
"""

from __future__ import annotations

import os

import numpy as np

_BACKEND = None


def active_backend() -> str:
    global _BACKEND
    if _BACKEND is None:
        want = os.environ.get("MANINLAB_BACKEND", "auto").lower()
        if want not in ("auto", "numba", "numpy"):
            raise ValueError(f"MANINLAB_BACKEND={want!r} not in auto|numba|numpy")
        if want == "numpy":
            _BACKEND = "numpy"
        else:
            try:
                import numba  # noqa: F401
                _BACKEND = "numba"
            except ImportError:
                if want == "numba":
                    raise
                _BACKEND = "numpy"
    return _BACKEND


def _numba_kernel():
    from numba import njit

    @njit(cache=True)
    def kern(q, mul, add, exps, nvars, neg_one):
        total = 1
        for _ in range(nvars):
            total *= q
        counts = np.zeros(1 << nvars, dtype=np.int64)
        digits = np.zeros(nvars, dtype=np.int64)
        for _ in range(total):
            acc = 0
            for m in range(exps.shape[0]):
                val = 1
                for v in range(nvars):
                    e = exps[m, v]
                    for _ in range(e):
                        val = mul[val, digits[v]]
                acc = add[acc, val]
            if acc == 0:
                mask = 0
                for v in range(nvars):
                    if digits[v] == 0:
                        mask |= 1 << v
                counts[mask] += 1
            for v in range(nvars):
                digits[v] += 1
                if digits[v] == q:
                    digits[v] = 0
                else:
                    break
        return counts

    return kern


_NUMBA_KERN = None


def _pattern_counts_numba(q, mul, add, exps, nvars):
    global _NUMBA_KERN
    if _NUMBA_KERN is None:
        _NUMBA_KERN = _numba_kernel()
    return _NUMBA_KERN(q, mul, add, exps, nvars, q - 1)


def _pattern_counts_numpy(q, mul, add, exps, nvars, block=1 << 18):
    total = q**nvars
    counts = np.zeros(1 << nvars, dtype=np.int64)
    divisors = np.array([q**v for v in range(nvars)], dtype=np.int64)
    for lo in range(0, total, block):
        hi = min(lo + block, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = (idx[:, None] // divisors[None, :]) % q
        acc = np.zeros(hi - lo, dtype=np.int64)
        for m in range(exps.shape[0]):
            val = np.ones(hi - lo, dtype=np.int64)
            for v in range(nvars):
                for _ in range(exps[m, v]):
                    val = mul[val, digits[:, v]]
            acc = add[acc, val]
        mask = ((digits == 0) << np.arange(nvars, dtype=np.int64)[None, :]).sum(axis=1)
        sel = mask[acc == 0]
        counts += np.bincount(sel, minlength=1 << nvars)
    return counts


def pattern_counts(field, exps, nvars: int) -> np.ndarray:
    """counts[mask] = #{x in F_q^nvars : relation(x) = 0, zeros(x) = mask}.

    `exps` is the (n_monomials, nvars) exponent matrix of the relation;
    `field` a maninlab.fields.Fq.
    """
    exps = np.ascontiguousarray(np.array(exps, dtype=np.int64))
    mul = np.ascontiguousarray(field.mul_table())
    add = np.ascontiguousarray(field.add_table())
    if active_backend() == "numba":
        return _pattern_counts_numba(field.q, mul, add, exps, nvars)
    return _pattern_counts_numpy(field.q, mul, add, exps, nvars)


def superset_sums(counts: np.ndarray, nvars: int) -> np.ndarray:
    """out[mask] = sum of counts over all supersets of mask (zeta transform)."""
    out = counts.copy()
    for b in range(nvars):
        bit = 1 << b
        lower = np.arange(out.size) & bit == 0
        idx = np.arange(out.size)[lower]
        out[idx] += out[idx | bit]
    return out
