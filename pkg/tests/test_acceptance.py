"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.  Every check is exact (integers / rationals); the only
tolerance anywhere is the 1e-6 window of the numeric-limit oracle for the
volume constant.
"""

import itertools
import random
import time
from fractions import Fraction

import numpy as np

from maninlab.counts import (
    count_bilinear,
    count_bilinear_brute,
    count_bilinear_closed,
    count_open,
    count_points,
    counting_polynomial,
)
from maninlab.curves import EffDivisor, INF, brute_force_N, lifting_rhs, mu_div
from maninlab.fan import build_sigma_n, check_fan
from maninlab.lattice import alpha, alpha_series_value, delta
from maninlab.series import (
    check_local_identity,
    dp6a2_coeff_grid,
    dp6a2_vanishing_box,
    series_truncate,
)
from maninlab.rhopoly import RhoPoly
from maninlab.varieties import (
    anticanonical,
    builtin_dp6a2,
    builtin_xn,
    check_positivity,
    mu0,
    rlv_and_incidence,
)


def _report(num, desc, budget, t0, failures):
    elapsed = time.monotonic() - t0
    status = "PASS" if not failures else "FAIL"
    print(f"[{status}] criterion {num}: {desc} ({elapsed:.1f}s / budget {budget}s)")
    assert not failures, failures[:5]
    assert elapsed < budget, f"criterion {num} exceeded its {budget}s budget"


def test_criterion_01_fan_certificates():
    t0 = time.monotonic()
    failures = []
    for n in (3, 4, 5, 6):
        rep = check_fan(build_sigma_n(n))
        for flag in ("simplicial", "smooth", "complete", "separated", "projective"):
            if rep[flag] is not True:
                failures.append((n, flag))
    _report(1, "fan certificates for n in {3,4,5,6}", 5, t0, failures)


def test_criterion_02_local_identity():
    t0 = time.monotonic()
    failures = []
    for v, qs in ((builtin_xn(3), (2, 3, 4, 5)), (builtin_xn(4), (2, 3, 4, 5)),
                  (builtin_dp6a2(), (2, 3))):
        for q in qs:
            rep = check_local_identity(v, q)
            if not rep["pass"]:
                failures.append((v.name, q, str(rep["L1"]), str(rep["R"])))
    _report(2, "local identity L1 = L2 = R", 30, t0, failures)


def test_criterion_03_bilinear_counts():
    t0 = time.monotonic()
    failures = []
    for n in (1, 2, 3):
        for q in (2, 3, 4, 5):
            rec = count_bilinear(n, q, cross_check=False)
            if rec != count_bilinear_closed(n, q) or rec != count_bilinear_brute(n, q):
                failures.append((n, q))
    if count_bilinear(3, 2) != 36:
        failures.append("N_3(2) != 36")
    _report(3, "bilinear counts: recurrence = closed form = brute", 5, t0, failures)


def test_criterion_04_lifting_formula():
    t0 = time.monotonic()
    failures = []
    x3 = builtin_xn(3)
    for q, m_max in ((2, 5), (3, 4)):
        for m in range(m_max + 1):
            lhs = brute_force_N(x3, q, m)
            rhs = lifting_rhs(x3, q, m)
            if not (lhs["complete"] and rhs["complete"] and lhs["N"] == rhs["value"]):
                failures.append((q, m, lhs["N"], rhs["value"]))
        if brute_force_N(x3, q, 0)["N"] != count_open(x3, q):
            failures.append((q, "m=0 vs open"))
    _report(4, "lifting formula: brute force = torsor sum", 600, t0, failures)


def test_criterion_05_alpha_delta():
    t0 = time.monotonic()
    failures = []
    for n, k in ((3, 18), (4, 18), (5, 16)):
        v = builtin_xn(n)
        mk = anticanonical(v)
        a = alpha(v.eff_cone(), mk)
        if a != Fraction(1, n * (n - 1) ** n):
            failures.append((n, "alpha", str(a)))
        oracle = alpha_series_value(v.eff_cone(), mk, k, span_factor=34)
        if abs(float(a) - oracle) >= 1e-6:
            failures.append((n, "oracle", float(a), oracle))
        if delta(mk) != 1:
            failures.append((n, "delta"))
    if delta(anticanonical(builtin_dp6a2())) != 1:
        failures.append(("dp6a2", "delta"))
    _report(5, "alpha = 1/(n(n-1)^n) with oracle; delta = 1", 5, t0, failures)


def test_criterion_06_dp6a2_series():
    t0 = time.monotonic()
    failures = []
    dp = builtin_dp6a2()
    rho = RhoPoly((0, 1))
    for nu in itertools.product(range(3), repeat=3):
        box = dp6a2_vanishing_box(nu)
        grid = dp6a2_coeff_grid(nu, (13, 13, 13))
        # vanishing on the certified region within |d|_inf <= 12
        region = np.zeros((13, 13, 13), dtype=bool)
        region[box[0]:, :, :] = True
        region[:, box[1]:, :] = True
        region[:, :, box[2]:] = True
        if grid[region].any():
            failures.append((nu, "vanishing"))
        # degree bounds: deg a_{nu,d} <= |d| + min(nu_2, nu_3), improved at (0,1,1)
        for d in itertools.product(range(13), repeat=3):
            poly = grid[d]
            nz = np.nonzero(poly)[0]
            if nz.size == 0:
                continue
            deg = int(nz.max())
            if deg > sum(d) + min(nu[1], nu[2]):
                failures.append((nu, d, "majdeg"))
            if nu == (0, 1, 1) and 2 * deg > 2 * sum(d) + 1:
                failures.append((nu, d, "majdegbis"))
    # agreement with the truncated series on box 10, via the clearing
    # product, for patterns realizing every nu in {0,1,2}^3
    B = 10
    fg_of = {0: (0, 0), 1: (1, 0), 2: (1, 1)}   # nu_j -> (f, g) with f+g=nu
    fg1_of = {0: (0, 0), 1: (1, 0), 2: (0, 1)}  # nu_1 -> (f, g) with f+2g=nu
    patterns = []
    for nu in itertools.product(range(3), repeat=3):
        f1, g1 = fg1_of[nu[0]]
        f2, g2 = fg_of[nu[1]]
        f3, g3 = fg_of[nu[2]]
        patterns.append((0, f1, f2, f3, g1, g2, g3))
    for e in patterns:
        f, g = e[:4], e[4:]
        nu = (f[1] + 2 * g[0], f[2] + g[1], f[3] + g[2])
        ts = series_truncate(dp, e, B)
        grid = dp6a2_coeff_grid(nu, (B + 1,) * 3)
        for d in itertools.product(range(B - 3), repeat=3):
            a = ts.coeff(d)
            d1, d2, d3 = d
            if d1 >= 1 and d2 >= 1 and d3 >= 1:
                a = a - rho * ts.coeff((d1 - 1, d2 - 1, d3 - 1))
            if d2 >= 2 and d3 >= 2:
                a = a - rho * ts.coeff((d1, d2 - 2, d3 - 2))
            if d1 >= 1 and d2 >= 3 and d3 >= 3:
                a = a + rho * rho * ts.coeff((d1 - 1, d2 - 3, d3 - 3))
            if a != RhoPoly(grid[d].tolist()):
                failures.append((e, d, "agreement"))
    _report(6, "dP6-A2 series: vanishing region, truncation agreement, "
               "degree bounds", 60, t0, failures)


def test_criterion_07_positivity():
    t0 = time.monotonic()
    failures = []
    for n in (3, 4, 5):
        v = builtin_xn(n)
        rep = check_positivity(v)
        if not rep["all_pass"]:
            failures.append((n, rep))
        inter = next(c for c in rep["conditions"] if c["name"].startswith("interior"))
        want = [str(Fraction(1, n - 1))] + ["0"] * n
        if inter["vector"] != want:
            failures.append((n, "interior vector"))
    rep = check_positivity(builtin_dp6a2())
    if not rep["all_pass"]:
        failures.append(("dp6a2", rep))
    _report(7, "positivity hypotheses (eps = 1/1000 exact)", 1, t0, failures)


def test_criterion_08_counting_lemma_suite():
    t0 = time.monotonic()
    import tests.test_curves as tc
    failures = []
    try:
        tc.test_counting_lemma_property_suite_linear()
        tc.test_counting_lemma_property_suite_quasi()
    except AssertionError as exc:
        failures.append(str(exc))
    _report(8, "counting-lemma bounds: 500 linear + 200 quasi-linear "
               "instances", 60, t0, failures)


def test_criterion_09_moebius_suite():
    t0 = time.monotonic()
    failures = []
    for v in (builtin_xn(3), builtin_xn(4), builtin_dp6a2()):
        table = mu0(v)
        data = rlv_and_incidence(v)
        n = len(v.vars)
        full = (1 << n) - 1
        for m in range(1 << n):
            total = 0
            sub = m
            while True:
                total += table.values[sub]
                if sub == 0:
                    break
                sub = (sub - 1) & m
            if total != (1 if data.disjoint_masks[full & ~m] else 0):
                failures.append((v.name, bin(m)))
    # multiplicativity on 200 random disjoint-support divisor tuples
    x3 = builtin_xn(3)
    rng = random.Random(12)
    places_a = [INF, (0, 1)]
    places_b = [(1, 1), (1, 1, 1)]
    for _ in range(200):
        Ea = [EffDivisor.make([(p, 1) for p in places_a if rng.random() < 0.3])
              for _ in range(7)]
        Eb = [EffDivisor.make([(p, rng.choice((1, 2))) for p in places_b
                               if rng.random() < 0.3]) for _ in range(7)]
        both = [a + b for a, b in zip(Ea, Eb)]
        if mu_div(x3, both) != mu_div(x3, Ea) * mu_div(x3, Eb):
            failures.append("multiplicativity")
    _report(9, "Moebius identity exhaustive + multiplicativity", 10, t0, failures)


def test_criterion_10_point_count_consistency():
    t0 = time.monotonic()
    failures = []
    for v in (builtin_xn(3), builtin_xn(4), builtin_dp6a2()):
        for q in (2, 3):
            b = count_points(v, q, "brute")
            s = count_points(v, q, "strata")
            if b.count != s.count or b.raw != s.raw:
                failures.append((v.name, q, "methods"))
        for q in (2, 3, 4, 5):
            rep = count_points(v, q)
            if rep.raw % (q - 1) ** v.rank:
                failures.append((v.name, q, "divisibility"))
    coeffs, rep = counting_polynomial(builtin_xn(3))
    if coeffs != [1, 4, 1] or not rep["validated"] or rep["holdout"] != [7, 8]:
        failures.append(("x3 polynomial", coeffs))
    _report(10, "point counts: brute = strata, divisibility, "
                "counting polynomial", 60, t0, failures)
