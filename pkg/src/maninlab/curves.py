"""Divisors and section spaces on P^1 over F_q, section-kernel dimensions,
the divisor-level Moebius function, brute-force morphism counts, and the
torsor lifting identity.

The curve is fixed to P^1 (genus 0, class number 1).  A closed point is a
monic irreducible polynomial or the point at infinity; H^0(O(d)) is the
space of polynomials of degree <= d, vanishing at infinity meaning degree
strictly below d.  Canonical sections are the monic affine products, with
the infinity multiplicity carried as a degree deficit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exactla import gf_nullspace, gf_solve_affine_count
from .fields import (
    Fq,
    factorization_table,
    field_for_order,
    poly_add,
    poly_deg,
    poly_mul,
    poly_scale,
    poly_trim,
)
from .lattice import Cone, enumerate_dual_points
from .varieties import (
    LINEAR,
    QUASI_LINEAR,
    VarietyDescriptor,
    anticanonical,
    mu0,
    rlv_and_incidence,
)

GENUS = 0
CLASS_NUMBER = 1
INF = "inf"

DIVISOR_ENUM_CAP = 2**24
BRUTE_N_CAP = 2**30


def place_degree(place) -> int:
    return 1 if place == INF else len(place) - 1


@dataclass(frozen=True)
class EffDivisor:
    """Effective divisor on P^1: multiset of closed points."""

    parts: tuple  # sorted ((place, mult), ...), mult >= 1

    @staticmethod
    def make(items) -> "EffDivisor":
        acc = {}
        for place, mult in items:
            if mult < 0:
                raise ValueError("negative multiplicity")
            if mult:
                acc[place] = acc.get(place, 0) + mult
        key = lambda pm: (0,) if pm[0] == INF else (1, pm[0])
        return EffDivisor(tuple(sorted(acc.items(), key=key)))

    @staticmethod
    def zero() -> "EffDivisor":
        return EffDivisor(())

    @property
    def degree(self) -> int:
        return sum(m * place_degree(p) for p, m in self.parts)

    def mult_at(self, place) -> int:
        for p, m in self.parts:
            if p == place:
                return m
        return 0

    def support(self):
        return [p for p, _ in self.parts]

    def __add__(self, other: "EffDivisor") -> "EffDivisor":
        return EffDivisor.make(list(self.parts) + list(other.parts))


def divisor_of_section(F: Fq, poly: tuple, space_degree: int, table=None) -> EffDivisor:
    """div(s) for a nonzero s in H^0(O(space_degree))."""
    if not poly:
        raise ValueError("the zero section has no divisor")
    monic = poly_scale(F, F.inv(poly[-1]), poly)
    table = table if table is not None else factorization_table((F.p, F.f), len(monic) - 1)
    parts = [(g, m) for g, m in table[monic]]
    inf_mult = space_degree - (len(poly) - 1)
    if inf_mult:
        parts.append((INF, inf_mult))
    return EffDivisor.make(parts)


def canonical_section(F: Fq, D: EffDivisor) -> tuple:
    """sigma_D as a polynomial: the monic affine part (infinity is carried
    by the degree deficit)."""
    out = (1,)
    for place, mult in D.parts:
        if place == INF:
            continue
        for _ in range(mult):
            out = poly_mul(F, out, place)
    return out


def enumerate_divisors(q: int, d: int):
    """All effective divisors of degree exactly d on P^1 over F_q."""
    if d < 0:
        return []
    if q ** (d + 1) > DIVISOR_ENUM_CAP:
        raise ValueError("divisor enumeration cap exceeded")
    F = field_for_order(q)
    table = factorization_table((F.p, F.f), d)
    out = []
    for k in range(d + 1):
        for tail in itertools.product(range(q), repeat=k):
            monic = tuple(tail) + (1,) if k else (1,)
            parts = list(table[monic])
            if d - k:
                parts.append((INF, d - k))
            out.append(EffDivisor.make(parts))
    return out


def ell(d: int) -> int:
    """dim H^0(P^1, O(d)) = max(0, d + 1)."""
    return max(0, d + 1)


def divisor_count_bound(q: int, d: int) -> Fraction:
    """The counting bound q^(1+d) h / (q - 1) for degree-d divisors."""
    return Fraction(q ** (1 + d) * CLASS_NUMBER, q - 1)


# ---------------------------------------------------------------------------
# section-kernel dimensions
# ---------------------------------------------------------------------------

def _section_matrix(F: Fq, multipliers, hprimes, H: int):
    """Columns x^k * m_j (k <= h'_j) in the degree-<=H coefficient basis."""
    cols = []
    col_index = []
    for j, (m_j, hp) in enumerate(zip(multipliers, hprimes)):
        for k in range(ell(hp)):
            prod = poly_mul(F, (0,) * k + (1,), m_j)
            if poly_deg(prod) > H:
                raise ValueError("degree bookkeeping violated")
            col = list(prod) + [0] * (H + 1 - len(prod))
            cols.append(col)
            col_index.append((j, k))
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(H + 1)]
    return rows, col_index


def kernel_count(F: Fq, sections, h_list, hprime_list, H: int,
                 shape: str = LINEAR) -> int:
    """#ker of the section map: q^nullity for the linear shape, the raw
    fiber cardinality over t_1-enumeration for the quasi-linear one.

    The quasi-linear count need not be a power of q for arbitrary sections
    (squaring is not linear), so bounds on log_q of it are compared in
    exponentiated integer form.
    """
    for s, h in zip(sections, h_list):
        if not s:
            raise ValueError("sections must be nonzero")
        if poly_deg(s) > h:
            raise ValueError("section degree exceeds its space")
    if shape == LINEAR:
        if all(hp < 0 for hp in hprime_list):
            return 1
        rows, _ = _section_matrix(F, sections, hprime_list, H)
        ncols = sum(ell(hp) for hp in hprime_list)
        return F.q ** len(gf_nullspace(F, rows, ncols=ncols))
    return _quasi_solution_count(F, sections, hprime_list, H)


def kernel_dim(F: Fq, sections, h_list, hprime_list, H: int, shape: str = LINEAR) -> int:
    """Delta_s = log_q kernel_count, for the cases where that is integral.

    Raises ValueError on a quasi-linear fiber whose size is not a q-power
    (possible for unstructured sections)."""
    total = kernel_count(F, sections, h_list, hprime_list, H, shape)
    delta = 0
    while total > 1:
        if total % F.q:
            raise ValueError("kernel size is not a power of q")
        total //= F.q
        delta += 1
    return delta


def _quasi_solution_count(F: Fq, sections, hprime_list, H: int,
                          multipliers=None) -> int:
    """#{(t_1,..,t_n): t_1^2 m_1 + sum_{k>=2} t_k m_k = 0, deg t_k <= h'_k}."""
    mults = multipliers if multipliers is not None else sections
    h1 = hprime_list[0]
    rest_mults = mults[1:]
    rest_hp = hprime_list[1:]
    rows, _ = _section_matrix(F, rest_mults, rest_hp, H)
    ncols = sum(ell(hp) for hp in rest_hp)
    count = 0
    for t1 in _all_polys_iter(F, h1):
        sq = poly_mul(F, poly_mul(F, t1, t1), mults[0])
        rhs = [F.neg(sq[r]) if r < len(sq) else 0 for r in range(H + 1)]
        if ncols == 0:
            count += 1 if all(x == 0 for x in rhs) else 0
        else:
            count += gf_solve_affine_count(F, rows, rhs)
    return count


def _all_polys_iter(F: Fq, maxdeg: int):
    if maxdeg < 0:
        yield ()
        return
    for code in range(F.q ** (maxdeg + 1)):
        c = []
        m = code
        for _ in range(maxdeg + 1):
            c.append(m % F.q)
            m //= F.q
        yield poly_trim(c)


def inf_divisor(F: Fq, sections, h_list) -> EffDivisor:
    """Inf_j div(s_j): gcd of the affine parts plus the minimal infinity
    deficit."""
    from .fields import poly_gcd

    g = None
    for s in sections:
        monic = poly_scale(F, F.inv(s[-1]), s)
        g = monic if g is None else poly_gcd(F, g, monic)
    table = factorization_table((F.p, F.f), max(0, poly_deg(g)))
    parts = list(table[g])
    inf_mult = min(h - poly_deg(s) for s, h in zip(sections, h_list))
    if inf_mult:
        parts.append((INF, inf_mult))
    return EffDivisor.make(parts)


# ---------------------------------------------------------------------------
# divisor-level Moebius function
# ---------------------------------------------------------------------------

def mu_div(v: VarietyDescriptor, E) -> int:
    """mu_X(E) = prod over places of mu^0 of the multiplicity pattern;
    zero whenever any multiplicity is >= 2."""
    table = mu0(v)
    places = set()
    for comp in E:
        places.update(comp.support())
    out = 1
    for place in places:
        pattern = tuple(comp.mult_at(place) for comp in E)
        out *= table.of_pattern(pattern)
        if out == 0:
            return 0
    return out


# ---------------------------------------------------------------------------
# N(D, E) and its K-variants
# ---------------------------------------------------------------------------

def _ndE_data(v: VarietyDescriptor, q: int, D, E, twist=None):
    F = field_for_order(q)
    ns = len(v.s_ids)
    y = tuple(D[i].degree + E[i].degree for i in range(ns))
    caps_t = [sum(v.degrees[t][i] * y[i] for i in range(ns)) for t in v.t_ids]
    hprimes = [caps_t[j] - E[ns + j].degree for j in range(len(v.t_ids))]
    H = sum(v.d_tot()[i] * y[i] for i in range(ns))
    mults = []
    for jdx, tj in enumerate(v.t_ids):
        m = canonical_section(F, E[ns + jdx])
        for idx in range(ns):
            b = v.b[idx][jdx]
            if b:
                base = poly_mul(F, canonical_section(F, D[idx]),
                                canonical_section(F, E[idx]))
                for _ in range(b):
                    m = poly_mul(F, m, base)
        if twist:
            m = poly_scale(F, twist.get(tj, 1), m)
        mults.append(m)
    return F, hprimes, H, mults


def count_NK(v: VarietyDescriptor, q: int, D, E, K, twist=None) -> int:
    """#{(t_j): t_j = 0 for j not in K, relation holds}."""
    F, hprimes, H, mults = _ndE_data(v, q, D, E, twist)
    Kset = set(K)
    j0 = v.t_ids[0]
    if v.shape == QUASI_LINEAR and j0 in Kset:
        idxs = [j for j, t in enumerate(v.t_ids) if t in Kset and j != 0]
        return _quasi_solution_count(
            F, None, [hprimes[0]] + [hprimes[j] for j in idxs], H,
            multipliers=[mults[0]] + [mults[j] for j in idxs])
    idxs = [j for j, t in enumerate(v.t_ids) if t in Kset]
    if v.shape == QUASI_LINEAR:
        pass  # t_1 = 0 kills the quadratic term; the rest is linear
    sel_hp = [hprimes[j] for j in idxs]
    sel_m = [mults[j] for j in idxs]
    ncols = sum(ell(hp) for hp in sel_hp)
    if ncols == 0:
        return 1
    rows, _ = _section_matrix(F, sel_m, sel_hp, H)
    return q ** len(gf_nullspace(F, rows, ncols=ncols))


def count_NDE(v: VarietyDescriptor, q: int, D, E, twist=None) -> int:
    """N(D, E): tuples with every t_j nonzero, by inclusion-exclusion."""
    J = list(v.t_ids)
    total = 0
    for bits in range(1 << len(J)):
        K = [J[j] for j in range(len(J)) if bits >> j & 1]
        sign = (-1) ** (len(J) - len(K))
        total += sign * count_NK(v, q, D, E, K, twist)
    return total


def count_NDE_brute(v: VarietyDescriptor, q: int, D, E) -> int:
    """Independent oracle: enumerate all t-tuples directly."""
    F, hprimes, H, mults = _ndE_data(v, q, D, E)
    total = 0
    spaces = [list(_all_polys_iter(F, hp)) for hp in hprimes]
    for combo in itertools.product(*spaces):
        if any(not t for t in combo):
            continue
        acc = ()
        for jdx, t in enumerate(combo):
            term = poly_mul(F, t, mults[jdx])
            if v.shape == QUASI_LINEAR and jdx == 0:
                term = poly_mul(F, t, term)
            acc = poly_add(F, acc, term)
        if not acc:
            total += 1
    return total


# ---------------------------------------------------------------------------
# brute-force morphism counting
# ---------------------------------------------------------------------------

def _admissible(v: VarietyDescriptor, F: Fq, polys, caps, data, table) -> bool:
    """Every closed point's support pattern is admissible: only points
    dividing some coordinate (or infinity via degree deficits) matter."""
    nvars = len(v.vars)
    full = (1 << nvars) - 1
    factor_sets = []
    primes = set()
    for u in polys:
        fs = {g for g, _ in table[poly_scale(F, F.inv(u[-1]), u)]}
        factor_sets.append(fs)
        primes |= fs
    for g in primes:
        supp = 0
        for i in range(nvars):
            if g not in factor_sets[i]:
                supp |= 1 << i
        if not data.semistable_masks[supp]:
            return False
    supp_inf = 0
    for i in range(nvars):
        if poly_deg(polys[i]) == caps[i]:
            supp_inf |= 1 << i
    return bool(data.semistable_masks[supp_inf])


def brute_force_N(v: VarietyDescriptor, q: int, m: int, cap: int = BRUTE_N_CAP) -> dict:
    """Morphisms P^1 -> X of anticanonical degree m meeting the open part.

    Per multidegree y: enumerate nonzero s-sections, solve the relation for
    the t-sections (kernel enumeration), keep tuples that are nonzero in
    every coordinate and admissible at every closed point; divide by
    (q-1)^r.  Skipped multidegrees (cap) flag the result incomplete.
    """
    F = field_for_order(q)
    data = rlv_and_incidence(v)
    mk = anticanonical(v)
    eff = v.eff_cone()
    ns = len(v.s_ids)
    r = v.rank
    total = 0
    complete = True
    skipped = []
    for y in enumerate_dual_points(eff, mk, m):
        caps_s = [sum(v.degrees[s][i] * y[i] for i in range(r)) for s in v.s_ids]
        caps_t = [sum(v.degrees[t][i] * y[i] for i in range(r)) for t in v.t_ids]
        H = sum(v.d_tot()[i] * y[i] for i in range(r))
        n_s_tuples = 1
        for c in caps_s:
            n_s_tuples *= q ** (c + 1) - 1
        t_space = q ** sum(ell(c) for c in caps_t)
        if n_s_tuples * min(t_space, q ** (max(ell(c) for c in caps_t))) > cap:
            complete = False
            skipped.append(list(y))
            continue
        table = factorization_table((F.p, F.f), max(caps_s + caps_t + [1]))
        raw = 0
        s_spaces = [[s for s in _all_polys_iter(F, c) if s] for c in caps_s]
        for s_tuple in itertools.product(*s_spaces):
            raw += _count_t_solutions(v, F, s_tuple, caps_s, caps_t, H, data, table)
        if raw % (q - 1) ** r:
            raise AssertionError(f"torsor orbit count not divisible at y={y}")
        total += raw // (q - 1) ** r
    return {"m": m, "N": total, "complete": complete, "skipped_y": skipped}


def _count_t_solutions(v, F, s_tuple, caps_s, caps_t, H, data, table) -> int:
    """Count admissible all-nonzero t-completions of a fixed s-tuple."""
    mults = []
    for jdx in range(len(v.t_ids)):
        m = (1,)
        for idx in range(len(v.s_ids)):
            for _ in range(v.b[idx][jdx]):
                m = poly_mul(F, m, s_tuple[idx])
        mults.append(m)
    caps = list(caps_s) + list(caps_t)
    count = 0
    if v.shape == LINEAR:
        rows, col_index = _section_matrix(F, mults, caps_t, H)
        ncols = sum(ell(c) for c in caps_t)
        basis = gf_nullspace(F, rows, ncols=ncols)
        for t_tuple in _kernel_elements(F, basis, col_index, caps_t):
            if any(not t for t in t_tuple):
                continue
            polys = list(s_tuple) + list(t_tuple)
            if _admissible(v, F, polys, caps, data, table):
                count += 1
        return count
    # quasi-linear: enumerate t_1, solve for the rest
    rest_mults = mults[1:]
    rest_caps = caps_t[1:]
    rows, col_index = _section_matrix(F, rest_mults, rest_caps, H)
    ncols = sum(ell(c) for c in rest_caps)
    for t1 in _all_polys_iter(F, caps_t[0]):
        if not t1:
            continue
        sq = poly_mul(F, poly_mul(F, t1, t1), mults[0])
        rhs = [F.neg(sq[k]) if k < len(sq) else 0 for k in range(H + 1)]
        sol = _affine_solutions(F, rows, rhs, ncols)
        if sol is None:
            continue
        part, basis = sol
        for t_rest in _kernel_elements(F, basis, col_index, rest_caps, offset=part):
            t_tuple = (t1,) + tuple(t_rest)
            if any(not t for t in t_tuple):
                continue
            polys = list(s_tuple) + list(t_tuple)
            if _admissible(v, F, polys, caps, data, table):
                count += 1
    return count


def _affine_solutions(F, rows, rhs, ncols):
    """(particular solution, nullspace basis) of rows . x = rhs, or None."""
    if ncols == 0:
        return ((), []) if all(x == 0 for x in rhs) else None
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    nr = len(aug)
    pivots = []
    row = 0
    for col in range(ncols):
        piv = None
        for rr in range(row, nr):
            if aug[rr][col] != 0:
                piv = rr
                break
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = F.inv(aug[row][col])
        aug[row] = [F.mul(inv, x) for x in aug[row]]
        for rr in range(nr):
            if rr != row and aug[rr][col] != 0:
                c = aug[rr][col]
                aug[rr] = [F.sub(x, F.mul(c, yv)) for x, yv in zip(aug[rr], aug[row])]
        pivots.append(col)
        row += 1
        if row == nr:
            break
    for rr in range(row, nr):
        if aug[rr][ncols] != 0:
            return None
    part = [0] * ncols
    for rr, col in enumerate(pivots):
        part[col] = aug[rr][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vbs = [0] * ncols
        vbs[fc] = 1
        for rr, pc in enumerate(pivots):
            vbs[pc] = F.neg(aug[rr][fc])
        basis.append(tuple(vbs))
    return tuple(part), basis


def _kernel_elements(F, basis, col_index, hprimes, offset=None):
    """All vectors offset + span(basis), decoded to polynomial tuples."""
    nj = len(hprimes)
    ncols = sum(ell(hp) for hp in hprimes)
    offset = offset if offset is not None else (0,) * ncols
    for combo in itertools.product(range(F.q), repeat=len(basis)):
        vec = list(offset)
        for c, b in zip(combo, basis):
            if c:
                for k in range(ncols):
                    if b[k]:
                        vec[k] = F.add(vec[k], F.mul(c, b[k]))
        polys = []
        pos = 0
        for hp in hprimes:
            n = ell(hp)
            polys.append(poly_trim(vec[pos:pos + n]))
            pos += n
        yield tuple(polys)


# ---------------------------------------------------------------------------
# the lifting-formula right side
# ---------------------------------------------------------------------------

def lifting_rhs(v: VarietyDescriptor, q: int, m: int, cap: int = BRUTE_N_CAP) -> dict:
    """Coefficient of t^m of the universal-torsor lifting formula.

    Sum over multidegrees y at anticanonical level m, squarefree divisor
    tuples E with mu_X(E) != 0 inside the degree caps, and divisor tuples D
    of the complementary degrees, of mu_X(E) * N(D, E).
    """
    F = field_for_order(q)
    table = mu0(v)
    mk = anticanonical(v)
    eff = v.eff_cone()
    ns = len(v.s_ids)
    nvars = len(v.vars)
    r = v.rank
    nonzero_masks = [mm for mm in table.nonzero_masks() if mm]
    total = 0
    complete = True
    work = 0
    for y in enumerate_dual_points(eff, mk, m):
        caps = [sum(v.degrees[lab][i] * y[i] for i in range(r)) for lab in v.vars]
        maxdeg = max(caps + [0])
        from .fields import monic_irreducibles
        # ascending place degree, so the cutoff prune below is valid
        places = [INF] + (list(monic_irreducibles((F.p, F.f), maxdeg)) if maxdeg else [])
        assignments = []

        def rec(idx, remaining, acc, mu_acc):
            if idx == len(places):
                assignments.append((tuple(acc), mu_acc))
                return
            place = places[idx]
            dv = place_degree(place)
            if dv > max(remaining, default=-1):
                # no later place fits either: everything else gets pattern 0
                assignments.append((tuple(acc), mu_acc))
                return
            rec(idx + 1, remaining, acc, mu_acc)  # pattern 0 at this place
            for mask in nonzero_masks:
                if all(remaining[i] >= dv for i in range(nvars) if mask >> i & 1):
                    new_rem = list(remaining)
                    for i in range(nvars):
                        if mask >> i & 1:
                            new_rem[i] -= dv
                    rec(idx + 1, new_rem, acc + [(place, mask)],
                        mu_acc * table.values[mask])

        rec(0, list(caps), [], 1)
        for assignment, mu_val in assignments:
            E = []
            for i in range(nvars):
                parts = [(place, 1) for place, mask in assignment if mask >> i & 1]
                E.append(EffDivisor.make(parts))
            d_lists = []
            feasible = True
            for i in range(ns):
                di = caps[i] - E[i].degree
                if di < 0:
                    feasible = False
                    break
                d_lists.append(enumerate_divisors(q, di))
            if not feasible:
                continue
            n_drops = 1
            for dl in d_lists:
                n_drops *= len(dl)
            work += n_drops
            if work > cap:
                complete = False
                break
            for D in itertools.product(*d_lists):
                total += mu_val * count_NDE(v, q, list(D), E)
        if not complete:
            break
    return {"m": m, "value": total, "complete": complete}


# ---------------------------------------------------------------------------
# the zeta diagnostic table
# ---------------------------------------------------------------------------

def zeta_report(v: VarietyDescriptor, q: int, m_max: int, euler_bound: int,
                cap: int = BRUTE_N_CAP) -> dict:
    """Diagnostic table: N(m) against the truncated-gamma main term."""
    from .counts import gamma_truncated

    gam = gamma_truncated(v, q, euler_bound)
    mk = anticanonical(v)
    eff = v.eff_cone()
    rows = []
    for m in range(m_max + 1):
        res = brute_force_N(v, q, m, cap)
        c_m = len(enumerate_dual_points(eff, mk, m))
        main = gam.value * c_m * q**m
        rows.append({
            "m": m,
            "N": res["N"],
            "main_term_num": main.numerator,
            "main_term_den": main.denominator,
            "complete": res["complete"],
        })
    return {"variety": v.name, "q": q, "euler_bound": euler_bound, "rows": rows}
