"""Point counts over finite fields: bilinear counts, torsor strata, the
counting polynomial, and the truncated Euler product for gamma.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._kernels import pattern_counts
from .fields import field_for_order
from .varieties import VarietyDescriptor, rlv_and_incidence

BRUTE_POINT_CAP = 2**28
BRUTE_BILINEAR_CAP = 2**24


def relation_exponents(v: VarietyDescriptor):
    """Exponent matrix of the relation in the canonical variable order."""
    mons = v.monomials()
    out = np.zeros((len(mons), len(v.vars)), dtype=np.int64)
    for m, mon in enumerate(mons):
        for label, e in mon.items():
            out[m, v.var_index(label)] = e
    return out


# ---------------------------------------------------------------------------
# N_n(q): the bilinear hypersurface counts
# ---------------------------------------------------------------------------

def count_bilinear(n: int, q: int, cross_check: bool = True) -> int:
    """N_n(q) = #{sum_{i<=n} x_i y_i = 0} by the recurrence from N_1 = 2q-1,
    brute-force checked whenever q^(2n) fits the cap."""
    if n < 1:
        raise ValueError("n >= 1 required")
    val = 2 * q - 1
    for k in range(2, n + 1):
        val = q * val + (q - 1) * q ** (2 * k - 2)
    if cross_check and q ** (2 * n) <= BRUTE_BILINEAR_CAP:
        assert val == count_bilinear_brute(n, q), (n, q)
    return val


def count_bilinear_closed(n: int, q: int) -> int:
    return q ** (2 * n - 1) + q**n - q ** (n - 1)


def count_bilinear_brute(n: int, q: int) -> int:
    F = field_for_order(q)
    exps = np.zeros((n, 2 * n), dtype=np.int64)
    for i in range(n):
        exps[i, i] = 1
        exps[i, n + i] = 1
    return int(pattern_counts(F, exps, 2 * n).sum())


# ---------------------------------------------------------------------------
# torsor point counts
# ---------------------------------------------------------------------------

@dataclass
class PointCountReport:
    q: int
    raw: int          # #X̂(F_q), the torsor count
    count: int        # #X(F_q) = raw / (q-1)^r
    open_count: int   # #X_0(F_q)
    method: str

    def json_dict(self):
        return {"q": self.q, "raw_torsor": self.raw, "count": self.count,
                "open_count": self.open_count, "method": self.method}


def _pattern_histogram(v: VarietyDescriptor, q: int):
    F = field_for_order(q)
    nvars = len(v.vars)
    if q**nvars > BRUTE_POINT_CAP:
        raise ValueError(f"brute cap exceeded: {q}^{nvars}")
    return pattern_counts(F, relation_exponents(v), nvars)


def _nonzero_sum_count(a: int, q: int) -> int:
    """#{(z_1..z_a) in (F_q^*)^a : sum z_i = 0}."""
    return ((q - 1) ** a + (-1) ** a * (q - 1)) // q


def _stratum_count(v: VarietyDescriptor, support: frozenset, q: int) -> int:
    """#Z(support)(F_q): relation solutions with exactly this support.

    Closed form when the surviving monomials are pairwise variable-disjoint
    and each carries a variable with exponent 1 (true for the built-ins);
    otherwise a guarded brute enumeration of the stratum.
    """
    mons = [m for m in v.monomials() if set(m) <= support]
    used = [x for m in mons for x in m]
    disjoint = len(used) == len(set(used))
    uniform = all(any(e == 1 for e in m.values()) for m in mons)
    if disjoint and uniform:
        a = len(mons)
        core = _nonzero_sum_count(a, q) if a else 1
        extra_in_mons = sum(len(m) - 1 for m in mons)
        free = len(support) - len(used)
        return core * (q - 1) ** (extra_in_mons + free) if a else (q - 1) ** len(support)
    # brute fallback over the stratum
    F = field_for_order(q)
    idxs = sorted(v.var_index(l) for l in support)
    if (q - 1) ** len(idxs) > BRUTE_POINT_CAP:
        raise ValueError("stratum brute cap exceeded")
    exps = relation_exponents(v)
    count = 0
    import itertools
    for vals in itertools.product(range(1, q), repeat=len(idxs)):
        x = [0] * len(v.vars)
        for i, val in zip(idxs, vals):
            x[i] = val
        acc = 0
        for m in range(exps.shape[0]):
            term = 1
            for c in range(len(x)):
                for _ in range(exps[m, c]):
                    term = F.mul(term, x[c])
            acc = F.add(acc, term)
        if acc == 0:
            count += 1
    return count


def count_points(v: VarietyDescriptor, q: int, method: str = "auto") -> PointCountReport:
    """#X(F_q) via the torsor: sum admissible strata, divide by (q-1)^r."""
    data = rlv_and_incidence(v)
    nvars = len(v.vars)
    full = (1 << nvars) - 1
    r = v.rank
    if method == "auto":
        method = "brute" if q**nvars <= BRUTE_POINT_CAP else "strata"
    if method == "brute":
        hist = _pattern_histogram(v, q)
        raw = 0
        open_raw = int(hist[0])
        for zeros in range(1 << nvars):
            if data.semistable_masks[full & ~zeros]:
                raw += int(hist[zeros])
    elif method == "strata":
        raw = 0
        open_raw = None
        for m in range(1 << nvars):
            if not data.semistable_masks[m]:
                continue
            support = frozenset(v.vars[i] for i in range(nvars) if m >> i & 1)
            c = _stratum_count(v, support, q)
            raw += c
            if m == full:
                open_raw = c
        assert open_raw is not None
    else:
        raise ValueError(f"unknown method {method}")
    denom = (q - 1) ** r
    if raw % denom:
        raise AssertionError(f"torsor count {raw} not divisible by (q-1)^{r}")
    if open_raw % denom:
        raise AssertionError("open-stratum count not divisible")
    return PointCountReport(q=q, raw=raw, count=raw // denom,
                            open_count=open_raw // denom, method=method)


def count_open(v: VarietyDescriptor, q: int, method: str = "auto") -> int:
    return count_points(v, q, method).open_count


# ---------------------------------------------------------------------------
# counting polynomial and gamma
# ---------------------------------------------------------------------------

def _prime_powers():
    q = 1
    while True:
        q += 1
        try:
            field_for_order(q)
        except ValueError:
            continue
        yield q


HOLDOUT_NODES = (7, 8)


def counting_polynomial(v: VarietyDescriptor, holdout=HOLDOUT_NODES):
    """Interpolate #X(F_q) as an integer polynomial in q, holdout-validated.

    Nodes are the smallest prime powers outside the holdout set; degree is
    capped by dim X-hat = |I u J| - 1.  Returns (coeffs low->high, report);
    coeffs is None when validation fails.
    """
    d = len(v.vars) - v.rank
    n_nodes = 2 * d + 2
    nodes = []
    gen = _prime_powers()
    while len(nodes) < n_nodes:
        q = next(gen)
        if q not in holdout:
            nodes.append(q)
    values = [count_points(v, q, "strata").count for q in nodes]
    # Lagrange -> coefficient form, exactly
    coeffs = [Fraction(0)] * n_nodes
    for i, (xi, yi) in enumerate(zip(nodes, values)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(nodes):
            if j == i:
                continue
            basis = [Fraction(0)] + basis[:]
            shifted = [c * (-xj) for c in basis[1:]] + [Fraction(0)]
            basis = [a + b for a, b in zip(basis, shifted + [Fraction(0)] * (len(basis) - len(shifted)))]
            denom *= xi - xj
        for k in range(len(basis)):
            coeffs[k] += yi * basis[k] / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    report = {"nodes": nodes, "values": values, "holdout": list(holdout)}
    if any(c.denominator != 1 for c in coeffs):
        report["validated"] = False
        report["reason"] = "non-integer coefficients"
        return None, report
    ints = [int(c) for c in coeffs]
    if len(ints) - 1 > len(v.vars) - 1:
        report["validated"] = False
        report["reason"] = "degree exceeds dim of the torsor"
        return None, report
    ok = True
    holdout_rows = []
    for q in holdout:
        pred = sum(c * q**k for k, c in enumerate(ints))
        actual = count_points(v, q, "strata").count
        holdout_rows.append({"q": q, "predicted": pred, "actual": actual})
        ok &= pred == actual
    report["holdout_rows"] = holdout_rows
    report["validated"] = ok
    report["coefficients"] = ints if ok else None
    return (ints if ok else None), report


def _poly_eval_int(coeffs, x: int) -> int:
    out = 0
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _moebius(n: int) -> int:
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def monic_irreducible_count(q: int, f: int) -> int:
    """Number of degree-f places of A^1 over F_q (necklace formula)."""
    total = sum(_moebius(e) * q ** (f // e) for e in range(1, f + 1) if f % e == 0)
    assert total % f == 0
    return total // f


@dataclass
class GammaReport:
    q: int
    degree_bound: int
    value: Fraction
    partials: list      # partial product after including degrees 1..B
    place_factors: list

    def json_dict(self):
        return {
            "q": self.q,
            "degree_bound": self.degree_bound,
            "value": [self.value.numerator, self.value.denominator],
            "partials": [[p.numerator, p.denominator] for p in self.partials],
            "place_factors": self.place_factors,
        }


def gamma_truncated(v: VarietyDescriptor, q: int, B: int) -> GammaReport:
    """Truncated Euler product for gamma(X) over places of P^1 of degree <= B.

    Uses the validated counting polynomial for #X(F_{q^f}) when available,
    else brute counts (capped).  The place at infinity is a degree-1 place.
    """
    r, dim = v.rank, v.dim
    coeffs, rep = counting_polynomial(v)
    prefactor = Fraction(q, q - 1) ** r * Fraction(q) ** dim
    value = prefactor
    partials = []
    place_factors = []
    for f in range(1, B + 1):
        qv = q**f
        if coeffs is not None:
            cnt = _poly_eval_int(coeffs, qv)
        else:
            cnt = count_points(v, qv, "auto").count
        local = (1 - Fraction(1, qv)) ** r * Fraction(cnt, qv**dim)
        n_places = monic_irreducible_count(q, f) + (1 if f == 1 else 0)
        value *= local**n_places
        partials.append(value)
        place_factors.append({
            "degree": f, "n_places": n_places,
            "factor": [local.numerator, local.denominator],
            "count": cnt,
        })
    return GammaReport(q=q, degree_bound=B, value=value,
                       partials=partials, place_factors=place_factors)
