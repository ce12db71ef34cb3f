"""Min/ceiling-type generating series: truncations, exact evaluations at
(rho, t) = (q, 1/q), local factors and densities, and the local identity.

For the linear shape the series is

    F_{rho,e}(t) = sum_d rho^( min_j ( g_j + sum_i b_ij (d_i + f_i) ) ) t^d,

for the quasi-linear (t_1^2) shape the exponent acquires the ceiling
correction; F-tilde multiplies by prod (1 - t_i).  Variables i with all
b_ij = 0 factor out of F-tilde analytically and are dropped from the
truncation grid.

Exact evaluation at t = 1/q decomposes the lattice sum into level sets of
the min (piecewise geometric in one parameter) for the linear shape, and
goes through the finite clearing polynomial for the quasi-linear shape.
Both are cross-checked against box truncations with a certified tail bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, lcm

import numpy as np

from ._kernels import pattern_counts, superset_sums
from .counts import count_points, relation_exponents
from .rhopoly import RhoPoly
from .varieties import LINEAR, QUASI_LINEAR, VarietyDescriptor, mu0

BOX_CELL_CAP = 1 << 22


# ---------------------------------------------------------------------------
# shape analysis
# ---------------------------------------------------------------------------

def _column_structure(v: VarietyDescriptor):
    """Per t_j column: (s-index, exponent) with at most one s-variable.

    The exact-evaluation and truncation machinery here covers relations
    whose monomials each involve a single s-variable (true for every
    built-in); anything richer raises.
    """
    cols = []
    for jdx in range(len(v.t_ids)):
        nz = [(idx, v.b[idx][jdx]) for idx in range(len(v.s_ids)) if v.b[idx][jdx]]
        if len(nz) > 1:
            raise NotImplementedError(
                "series machinery requires single-s-variable relation columns")
        cols.append(nz[0] if nz else None)
    return cols


def active_s_indices(v: VarietyDescriptor):
    return sorted({c[0] for c in _column_structure(v) if c is not None})


def _quasi_svars(v: VarietyDescriptor):
    """The three distinct exponent-1 s-variables of a quasi-linear relation."""
    cols = _column_structure(v)
    if any(c is None or c[1] != 1 for c in cols):
        raise NotImplementedError("quasi-linear machinery expects b_j = 1 columns")
    svars = [c[0] for c in cols]
    if len(set(svars)) != 3:
        raise NotImplementedError("quasi-linear machinery expects distinct s-variables")
    return svars


def _split_pattern(v: VarietyDescriptor, e):
    """e (over vars order) -> (f over s-ids, g over t-ids)."""
    e = tuple(int(x) for x in e)
    ns = len(v.s_ids)
    return e[:ns], e[ns:]


def _phi_on_grid(v: VarietyDescriptor, e, grid_shape):
    """Exponent phi(d) on an N^active grid, as an int64 array."""
    f, g = _split_pattern(v, e)
    cols = _column_structure(v)
    act = active_s_indices(v)
    pos = {i: k for k, i in enumerate(act)}
    axes = [np.arange(n) for n in grid_shape]
    mesh = np.meshgrid(*axes, indexing="ij") if axes else []
    BIG = np.int64(1 << 60)

    def ell(jdx, eps=1):
        base = eps * g[jdx]
        col = cols[jdx]
        if col is None:
            return np.full(grid_shape, base, dtype=np.int64)
        i, b = col
        return base + b * (mesh[pos[i]] + f[i])

    if v.shape == LINEAR:
        out = np.full(grid_shape, BIG)
        for jdx in range(len(v.t_ids)):
            out = np.minimum(out, ell(jdx))
        return out
    # quasi-linear: A = min_{j>=2} ell_j, B = min(ell_1 with 2g_1, A-terms)
    A = np.minimum(ell(1), ell(2))
    B = np.minimum(ell(0, eps=2), A)
    return (A + B) // 2


# ---------------------------------------------------------------------------
# truncation
# ---------------------------------------------------------------------------

@dataclass
class TruncatedSeries:
    e: tuple                  # pattern over the canonical variable order
    box: int
    active_labels: tuple      # s-labels carrying the truncation grid
    factored_labels: tuple    # s-labels removed analytically
    coeffs: dict              # d (tuple over active) -> RhoPoly

    def coeff(self, d) -> RhoPoly:
        return self.coeffs.get(tuple(d), RhoPoly())

    def json_dict(self):
        return {
            "e": list(self.e),
            "box": self.box,
            "active": list(self.active_labels),
            "factored_out": list(self.factored_labels),
            "coeffs": [
                {"d": list(d), "rho_poly": list(p.coeffs)}
                for d, p in sorted(self.coeffs.items())
            ],
        }


def series_truncate(v: VarietyDescriptor, e, B: int) -> TruncatedSeries:
    """Coefficients of F-tilde_{rho,e} on the box |d|_inf <= B.

    F has monomial coefficients rho^phi(d); the product with prod(1 - t_i)
    is the signed sum over 0/1 shifts, computed from F on the box B
    directly (shifts only look downward, so no boundary loss).
    """
    act = active_s_indices(v)
    k = len(act)
    if k and (B + 1) ** k > BOX_CELL_CAP:
        raise ValueError("box too large")
    e = tuple(int(x) for x in e)
    grid_shape = tuple([B + 1] * k)
    phi = _phi_on_grid(v, e, grid_shape)
    coeffs = {}
    for d in itertools.product(range(B + 1), repeat=k):
        acc = {}
        for mu in itertools.product((0, 1), repeat=k):
            dd = tuple(x - m for x, m in zip(d, mu))
            if any(x < 0 for x in dd):
                continue
            p = int(phi[dd]) if k else int(phi)
            sign = -1 if sum(mu) % 2 else 1
            acc[p] = acc.get(p, 0) + sign
        poly = [0] * (max(acc) + 1 if acc else 0)
        for p, c in acc.items():
            poly[p] += c
        rp = RhoPoly(poly)
        if not rp.is_zero():
            coeffs[d] = rp
    labels = [v.s_ids[i] for i in act]
    factored = [s for i, s in enumerate(v.s_ids) if i not in act]
    return TruncatedSeries(e=e, box=B, active_labels=tuple(labels),
                           factored_labels=tuple(factored), coeffs=coeffs)


# ---------------------------------------------------------------------------
# the dP6-A2 clearing-polynomial coefficients a_{nu,d}
# ---------------------------------------------------------------------------

def dp6a2_vanishing_box(nu):
    n1, n2, n3 = nu
    return (4 + abs(n2 - n1) + abs(n3 - n1),
            6 + abs(n1 - n2) + abs(n3 - n2),
            6 + abs(n1 - n3) + abs(n2 - n3))


def dp6a2_coeff_grid(nu, shape):
    """a_{nu,d}(rho) for d on a grid: int64 tensor (d1, d2, d3, rho-degree).

    The 32-term signed sum over (mu, gamma) in {0,1}^3 x {0,1}^2 subject to
    mu_1 + gamma_1 <= d_1, mu_j + gamma_1 + 2 gamma_2 <= d_j (j = 2, 3).
    """
    n1, n2, n3 = nu
    d1, d2, d3 = np.meshgrid(*(np.arange(s) for s in shape), indexing="ij")
    maxdeg = int(min(n2 + shape[1], n3 + shape[2])) + 1
    out = np.zeros(shape + (maxdeg,), dtype=np.int64)
    for mu in itertools.product((0, 1), repeat=3):
        for ga in itertools.product((0, 1), repeat=2):
            ok = (mu[0] + ga[0] <= d1) & (mu[1] + ga[0] + 2 * ga[1] <= d2) \
                 & (mu[2] + ga[0] + 2 * ga[1] <= d3)
            m23 = np.minimum(d2 + n2 - mu[1], d3 + n3 - mu[2])
            m = np.minimum(d1 + n1 - mu[0],
                           np.minimum(d2 + n2 - mu[1] - 2 * ga[1],
                                      d3 + n3 - mu[2] - 2 * ga[1]))
            phi = (m23 + np.minimum(m, m23)) // 2
            sign = -1 if (sum(mu) + sum(ga)) % 2 else 1
            phi_ok = np.where(ok, phi, 0)
            np.add.at(out, (d1, d2, d3, phi_ok), sign * ok.astype(np.int64))
    return out


def dp6a2_coeff(nu, d) -> RhoPoly:
    """The clearing-polynomial coefficient a_{nu,d}(rho)."""
    shape = tuple(x + 1 for x in d)
    grid = dp6a2_coeff_grid(tuple(nu), shape)
    return RhoPoly(grid[tuple(d)].tolist())


# ---------------------------------------------------------------------------
# exact evaluation at t = 1/q
# ---------------------------------------------------------------------------

def _exact_linear_sum(thresholds, q: int) -> Fraction:
    """1 + (q-1) sum_{m>=1} q^(m - 1 - sum_i T_i(m)), exactly.

    `thresholds` is a list (one entry per active variable) of lists of
    (c_j, b_j) with T_i(m) = max_j max(0, ceil((m - c_j)/b_j)); a None
    entry in the flat column list is handled by the caller.
    """
    flat = [cb for group in thresholds for cb in group]
    L = lcm(*[b for _, b in flat]) if flat else 1
    M0 = max([c for c, _ in flat], default=0) + 2 * L + 2

    def T(m):
        total = 0
        for group in thresholds:
            t = 0
            for c, b in group:
                t = max(t, max(0, ceil(Fraction(m - c, b))))
            total += t
        return total

    def E(m):
        return m - 1 - T(m)

    total = Fraction(0)
    for m in range(1, M0 + 1):
        total += Fraction(q) ** E(m)
    for r in range(L):
        m = M0 + 1 + r
        step = E(m + L) - E(m)
        assert E(m + 2 * L) - E(m + L) == step, "level sum not eventually affine"
        if step >= 0:
            raise ValueError("series diverges at t = 1/q")
        first = Fraction(q) ** E(m)
        ratio = Fraction(q) ** step
        total += first / (1 - ratio)
    return 1 + (q - 1) * total


_FTILDE_CACHE: dict = {}


def exact_ftilde_at(v: VarietyDescriptor, e, q: int) -> Fraction:
    """F-tilde_{q,e}(1/q, ..., 1/q) as an exact rational.

    Linear shape: level sets of the min give a piecewise geometric sum.
    Quasi-linear shape: the clearing polynomial is finite, so the value is
    a finite exact sum divided by the two clearing factors.  Values are
    positive by construction (sums of positive terms), asserted here.
    """
    e = tuple(int(x) for x in e)
    f, g = _split_pattern(v, e)
    cols = _column_structure(v)
    act = active_s_indices(v)
    if v.shape == LINEAR:
        # value depends only on the per-variable threshold groups and the
        # constant-column caps; cache on that structure
        const_caps = tuple(sorted(g[j] for j, c in enumerate(cols) if c is None))
        groups = {i: [] for i in act}
        for jdx, col in enumerate(cols):
            if col is None:
                continue
            i, b = col
            groups[i].append((g[jdx] + b * f[i], b))
        key = (q, const_caps,
               tuple(sorted(tuple(sorted(groups[i])) for i in act)))
        if key in _FTILDE_CACHE:
            return _FTILDE_CACHE[key]
        if const_caps:
            total = Fraction(0)
            # the level indicator dies above the smallest constant column
            def T(m):
                tot = 0
                for i in act:
                    t = 0
                    for c, b in groups[i]:
                        t = max(t, max(0, ceil(Fraction(m - c, b))))
                    tot += t
                return tot
            for m in range(1, const_caps[0] + 1):
                total += Fraction(q) ** (m - 1 - T(m))
            value = 1 + (q - 1) * total
        else:
            value = _exact_linear_sum([groups[i] for i in act], q)
        assert value > 0
        _FTILDE_CACHE[key] = value
        return value

    # quasi-linear: three distinct single-s columns with exponent 1
    svars = _quasi_svars(v)
    nu = (2 * g[0] + f[svars[0]], g[1] + f[svars[1]], g[2] + f[svars[2]])
    value = _dp6a2_ftilde_value(nu, q)
    assert value > 0
    return value


_DP6A2_VALUE_CACHE: dict = {}


def _dp6a2_ftilde_value(nu, q: int) -> Fraction:
    key = (tuple(nu), q)
    if key in _DP6A2_VALUE_CACHE:
        return _DP6A2_VALUE_CACHE[key]
    box = dp6a2_vanishing_box(nu)
    # rim margin asserts the vanishing statement we rely on
    shape = tuple(x + 3 for x in box)
    grid = dp6a2_coeff_grid(tuple(nu), shape)
    rim = grid[box[0]:, :, :, :], grid[:, box[1]:, :, :], grid[:, :, box[2]:, :]
    assert all(int(np.abs(part).sum()) == 0 for part in rim), \
        "clearing polynomial support exceeds the certified box"
    dmax = sum(b - 1 for b in box)
    num = 0
    for d in itertools.product(*(range(b) for b in box)):
        poly = grid[d]
        if not poly.any():
            continue
        a_val = 0
        for deg in range(poly.shape[0] - 1, -1, -1):
            a_val = a_val * q + int(poly[deg])
        num += a_val * q ** (dmax - sum(d))
    gtilde = Fraction(num, q**dmax)
    value = gtilde / ((1 - Fraction(1, q**2)) * (1 - Fraction(1, q**3)))
    _DP6A2_VALUE_CACHE[key] = value
    return value


def _nu_max(v: VarietyDescriptor, e) -> int:
    f, g = _split_pattern(v, e)
    cols = _column_structure(v)
    out = 0
    for j, col in enumerate(cols):
        eps = 2 if (v.shape == QUASI_LINEAR and j == 0) else 1
        c = eps * g[j] + (v.b[col[0]][j] * f[col[0]] if col else 0)
        out = max(out, c)
    return out


def truncated_ftilde_at(v: VarietyDescriptor, e, q: int, B: int):
    """(box-truncated value of F-tilde at 1/q, certified tail bound).

    phi(d) <= numax + min_i(d_i) <= numax + |d|/k for the linear shape on k
    active variables, and phi(d) <= numax + |d|/2 for the quasi-linear one,
    so with beta = (k-1)/k (resp. 1/2) the off-box mass of
    sum q^(phi(d) - |d|) is at most

        k * (7q/2)^(k-1) * (7/2) * q^numax * q^(-floor(beta (B+1)))

    using sum_m q^(-beta m) <= (7/2) q^(-floor(beta m0)) envelopes (valid
    for beta >= 1/2, q >= 2) and a union bound over the escaping
    coordinate.  The truncated value underestimates the exact one, so the
    cross-check asserts 0 <= exact - truncated <= tail.
    """
    act = active_s_indices(v)
    k = len(act)
    if k < 2:
        raise NotImplementedError("tail bound assumes >= 2 active variables")
    e = tuple(int(x) for x in e)
    grid_shape = tuple([B + 1] * k)
    phi = _phi_on_grid(v, e, grid_shape)
    value = Fraction(0)
    for d in itertools.product(range(B + 1), repeat=k):
        value += Fraction(q) ** (int(phi[d]) - sum(d))
    value *= (1 - Fraction(1, q)) ** k
    beta_num, beta_den = ((k - 1), k) if v.shape == LINEAR else (1, 2)
    drop = (beta_num * (B + 1)) // beta_den
    tail = k * Fraction(7 * q, 2) ** (k - 1) * Fraction(7, 2) \
        * Fraction(q) ** _nu_max(v, e) * Fraction(1, q) ** drop
    return value, tail


# ---------------------------------------------------------------------------
# local factors, densities, and the local identity
# ---------------------------------------------------------------------------

def local_factor(v: VarietyDescriptor, e, q: int) -> Fraction:
    """fact(e) = q^(-sum e) * F-tilde_{q,e}(1/q)."""
    e = tuple(int(x) for x in e)
    return Fraction(1, q ** sum(e)) * exact_ftilde_at(v, e, q)


def local_density_table(v: VarietyDescriptor, q: int):
    """dens(e) for all 0/1 patterns at once: solutions on the coordinate
    subspace killed by e, over q^(|I|+|J|-1)."""
    from .fields import field_for_order

    nvars = len(v.vars)
    F = field_for_order(q)
    hist = pattern_counts(F, relation_exponents(v), nvars)
    sols = superset_sums(hist, nvars)  # sols[mask] = solutions vanishing on mask
    denom = q ** (nvars - 1)
    return [Fraction(int(sols[m]), denom) for m in range(1 << nvars)]


def local_density(v: VarietyDescriptor, e, q: int) -> Fraction:
    e = tuple(int(x) for x in e)
    mask = sum(1 << i for i, x in enumerate(e) if x)
    return local_density_table(v, q)[mask]


def _mask_to_pattern(m: int, n: int):
    return tuple((m >> i) & 1 for i in range(n))


def check_local_identity(v: VarietyDescriptor, q: int) -> dict:
    """L1 = sum mu0(e) q^(-|e|) F-tilde_e(1/q);  L2 = sum mu0(e) dens(e);
    R = (1 - 1/q)^r #X(F_q) / q^dim.  Pass iff all three agree exactly."""
    table = mu0(v)
    nvars = len(v.vars)
    dens = local_density_table(v, q)
    L1 = Fraction(0)
    L2 = Fraction(0)
    for m in table.nonzero_masks():
        e = _mask_to_pattern(m, nvars)
        mu = table.values[m]
        L1 += mu * Fraction(1, q ** sum(e)) * exact_ftilde_at(v, e, q)
        L2 += mu * dens[m]
    pc = count_points(v, q)
    R = (1 - Fraction(1, q)) ** v.rank * Fraction(pc.count, q**v.dim)
    return {
        "q": q,
        "L1": L1,
        "L2": L2,
        "R": R,
        "count": pc.count,
        "pass": L1 == L2 == R,
    }


# ---------------------------------------------------------------------------
# degree-bound certificates
# ---------------------------------------------------------------------------

ETA = Fraction(1, 16)


def check_degree_bounds(v: VarietyDescriptor, e, B: int) -> dict:
    """Degree-bound certificate on the truncation box at eta = 1/16.

    LINEAR: deg P_{e,d} <= (1-eta)|d| - 1 - eta for in-box d != 0, plus the
    empirical constant max(deg - |d|).  QUASI_LINEAR: the clearing
    coefficients satisfy deg a_{nu,d} <= |d| + min(nu_2, nu_3), improved to
    <= |d| at nu = (0,1,1).
    """
    e = tuple(int(x) for x in e)
    report = {"e": list(e), "box": B, "eta": [ETA.numerator, ETA.denominator]}
    if v.shape == LINEAR:
        ts = series_truncate(v, e, B)
        worst = None
        ok = True
        for d, p in ts.coeffs.items():
            if all(x == 0 for x in d):
                continue
            dd = sum(d)
            deg = p.degree()
            ok &= Fraction(deg) <= (1 - ETA) * dd - 1 - ETA
            gap = deg - dd
            worst = gap if worst is None else max(worst, gap)
        report.update({"pass": bool(ok), "empirical_constant": worst})
        return report
    # quasi-linear: bounds on the a_{nu,d}
    f, g = _split_pattern(v, e)
    svars = _quasi_svars(v)
    nu = (2 * g[0] + f[svars[0]], g[1] + f[svars[1]], g[2] + f[svars[2]])
    grid = dp6a2_coeff_grid(nu, (B + 1,) * 3)
    ok = True
    worst = None
    improved_ok = True
    for d in itertools.product(range(B + 1), repeat=3):
        poly = grid[d]
        nzs = np.nonzero(poly)[0]
        if nzs.size == 0:
            continue
        deg = int(nzs.max())
        dd = sum(d)
        ok &= deg <= dd + min(nu[1], nu[2])
        if tuple(nu) == (0, 1, 1):
            improved_ok &= 2 * deg <= 2 * dd + 1
        gap = deg - dd
        worst = gap if worst is None else max(worst, gap)
    report.update({"nu": list(nu), "pass": bool(ok), "empirical_constant": worst,
                   "improved_bound_011": bool(improved_ok)})
    return report


# ---------------------------------------------------------------------------
# convergence certificate (the finite sufficient condition)
# ---------------------------------------------------------------------------

def check_convergence_certificate(v: VarietyDescriptor) -> dict:
    """The finite sufficient condition for the Euler-product convergence.

    LINEAR (X_n style, b_ij = delta): every nonzero 0/1 pattern with
    mu0 != 0 satisfies min_i(f_i + g_i) - sum_i(f_i + g_i) - f_0 <= -2.
    QUASI_LINEAR (dP6-A2): min(f2+g2, f3+g3) - sum f - sum g < -1, with the
    half-power improvement allowed in the single exceptional case.
    """
    table = mu0(v)
    nvars = len(v.vars)
    cols = _column_structure(v)
    violations = []
    for m in table.nonzero_masks():
        if m == 0:
            continue
        e = _mask_to_pattern(m, nvars)
        f, g = _split_pattern(v, e)
        if v.shape == LINEAR:
            pairs = [f[c[0]] + g[j] for j, c in enumerate(cols) if c is not None]
            f0 = sum(f[i] for i in range(len(v.s_ids))
                     if i not in {c[0] for c in cols if c})
            if min(pairs) - sum(pairs) - f0 > -2:
                violations.append(list(e))
        else:
            svars = _quasi_svars(v)
            m23 = min(f[svars[1]] + g[1], f[svars[2]] + g[2])
            base = -sum(f) - sum(g)
            if base + m23 < -1:
                continue
            # only the exceptional pattern may fall back on the half-power
            # degree bound (nu = (0,1,1) improvement)
            f0 = sum(f[i] for i in range(len(v.s_ids)) if i not in set(svars))
            exceptional = (f0 == 0 and f[svars[0]] == 0 and g[0] == 0
                           and f[svars[1]] + g[1] == 1 and f[svars[2]] + g[2] == 1)
            if exceptional and 2 * base + m23 < -2:
                continue
            violations.append(list(e))
    return {"pass": not violations, "violations": violations}
