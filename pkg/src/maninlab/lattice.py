"""Lattices, rational polyhedral cones, and the volume-type constant alpha.

All cone computations are exact: integer generators, Fraction elimination,
and a small double-description routine for converting between generator and
inequality representations at rank <= ~7.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, ceil, floor

from .exactla import (
    mat_det,
    mat_inverse,
    mat_rank,
    mat_solve,
    primitive_int_vector,
)


@dataclass(frozen=True)
class Lattice:
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("lattice rank must be >= 1")


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# double description: {x : a.x >= 0 for a in normals}  ->  lineality + rays
# ---------------------------------------------------------------------------

def dd_from_inequalities(normals, dim):
    """Minimal generator description of an H-cone.

    Returns (lineality_basis, rays) as primitive integer vectors.  Standard
    incremental double description with combinatorial adjacency on tight
    sets; fine for the handful of constraints we ever see.
    """
    lineality = [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    rays = []  # list of (vector, tightset)
    for k, a in enumerate(normals):
        a = tuple(a)
        lin_vals = [_dot(a, l) for l in lineality]
        if any(lin_vals):
            i0 = next(i for i, v in enumerate(lin_vals) if v)
            l0, v0 = lineality[i0], lin_vals[i0]
            if v0 < 0:
                l0 = tuple(-x for x in l0)
                v0 = -v0
            new_lin = []
            for i, (l, v) in enumerate(zip(lineality, lin_vals)):
                if i == i0:
                    continue
                new_lin.append(primitive_int_vector(
                    [Fraction(x) - Fraction(v, v0) * y for x, y in zip(l, l0)]))
            lineality = new_lin
            new_rays = []
            for r, tight in rays:
                v = _dot(a, r)
                rr = primitive_int_vector(
                    [Fraction(x) - Fraction(v, v0) * y for x, y in zip(r, l0)])
                new_rays.append((rr, tight | {k}))
            new_rays.append((primitive_int_vector(l0), set(range(k))))
            rays = _dedupe(new_rays)
            continue
        pos, zero, neg = [], [], []
        for r, tight in rays:
            v = _dot(a, r)
            if v > 0:
                pos.append((r, tight, v))
            elif v < 0:
                neg.append((r, tight, v))
            else:
                zero.append((r, tight | {k}))
        new_rays = [(r, t) for r, t, _ in pos] + zero
        for rp, tp, vp in pos:
            for rn, tn, vn in neg:
                common = tp & tn
                adjacent = True
                for r3, t3 in [(x[0], x[1]) for x in pos + neg] + zero:
                    if r3 is rp or r3 is rn:
                        continue
                    if common <= t3:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combo = tuple(vp * x - vn * y for x, y in zip(rn, rp))
                combo = primitive_int_vector(combo)
                new_rays.append((combo, common | {k}))
        rays = _dedupe(new_rays)
    out_rays = sorted(r for r, _ in rays)
    return [tuple(l) for l in lineality], out_rays


def _dedupe(rays):
    seen = {}
    for r, t in rays:
        if r in seen:
            seen[r] = (r, seen[r][1] | t)
        else:
            seen[r] = (r, t)
    return list(seen.values())


class Cone:
    """Rational polyhedral cone given by integer generators."""

    def __init__(self, generators, rank: int | None = None):
        gens = [tuple(int(x) for x in g) for g in generators]
        if rank is None:
            if not gens:
                raise ValueError("empty cone needs an explicit ambient rank")
            rank = len(gens[0])
        for g in gens:
            if len(g) != rank:
                raise ValueError("generator dimension mismatch")
            if gens and all(x == 0 for x in g):
                raise ValueError("zero vector is not a valid cone generator")
        self.rank = rank
        prim = []
        for g in gens:
            pg = primitive_int_vector(g)
            if pg not in prim:   # duplicate rays would defeat extremality tests
                prim.append(pg)
        self.generators = tuple(prim)
        self._hrep = None

    def __repr__(self):
        return f"Cone(rank={self.rank}, gens={list(self.generators)})"

    def dim(self) -> int:
        if not self.generators:
            return 0
        return mat_rank(list(self.generators))

    def is_simplicial(self) -> bool:
        return len(set(self.generators)) == self.dim()

    def hrep(self):
        """(equations, facet normals) for {x: e.x = 0, f.x >= 0}."""
        if self._hrep is None:
            lin, rays = dd_from_inequalities(self.generators, self.rank)
            # lin spans the orthogonal complement of span(generators)
            self._hrep = ([tuple(l) for l in lin], [tuple(r) for r in rays])
        return self._hrep

    def member(self, v) -> bool:
        eqs, facets = self.hrep()
        return all(_dot(e, v) == 0 for e in eqs) and all(_dot(f, v) >= 0 for f in facets)

    def relint_member(self, v) -> bool:
        """Relative-interior membership (strict on every facet)."""
        eqs, facets = self.hrep()
        return all(_dot(e, v) == 0 for e in eqs) and all(_dot(f, v) > 0 for f in facets)

    def interior_member(self, v) -> bool:
        """Topological-interior membership; False for non-full-dim cones."""
        eqs, facets = self.hrep()
        if eqs:
            return False
        return all(_dot(f, v) > 0 for f in facets)

    def extreme_rays(self):
        out = []
        for i, g in enumerate(self.generators):
            rest = [h for j, h in enumerate(self.generators) if j != i]
            if not rest or not Cone(rest, self.rank).member(g):
                out.append(g)
        seen = []
        for g in out:
            if g not in seen:
                seen.append(g)
        return sorted(seen)

    def dual(self) -> "Cone":
        """Dual cone {y: <y, g> >= 0}; requires the dual to be pointed."""
        lin, rays = dd_from_inequalities(self.generators, self.rank)
        if lin:
            # dual has a lineality part iff this cone is not full-dimensional
            raise ValueError("dual cone is not pointed (cone not full-dimensional)")
        return Cone(rays, self.rank)


def cone_member(cone: Cone, v, strict: bool = False) -> bool:
    """Exact membership of a rational vector; strict = topological interior."""
    if len(v) != cone.rank:
        raise ValueError("dimension mismatch")
    return cone.interior_member(v) if strict else cone.member(v)


def cone_intersection(cones) -> Cone:
    rank = cones[0].rank
    normals = []
    for c in cones:
        eqs, facets = c.hrep()
        for e in eqs:
            normals.append(e)
            normals.append(tuple(-x for x in e))
        normals.extend(facets)
    lin, rays = dd_from_inequalities(normals, rank)
    if lin:
        raise ValueError("intersection has a lineality space")
    return Cone(rays, rank)


# ---------------------------------------------------------------------------
# triangulation and the constant alpha
# ---------------------------------------------------------------------------

def _pulling_triangulation(gens, rank):
    """Deterministic pulling triangulation into full-dim simplicial cones."""
    cone = Cone(gens, rank)
    rays = cone.extreme_rays()
    d = cone.dim()
    if len(rays) == d:
        return [tuple(rays)]
    v0 = rays[0]
    eqs, facets = cone.hrep()
    out = []
    for f in facets:
        if _dot(f, v0) == 0:
            continue
        face_rays = [r for r in rays if _dot(f, r) == 0]
        for simplex in _pulling_triangulation(face_rays, rank):
            out.append(tuple(sorted(simplex + (v0,))))
    return out


def _simplex_index(gens):
    """|det| of the generator matrix in a lattice basis of their span."""
    d = mat_rank(list(gens))
    if d == len(gens[0]):
        return abs(int(mat_det(list(gens))))
    raise ValueError("index only implemented for full-dimensional simplices")


def _unimodularize(simplex):
    """Refine a full-dim simplicial cone into unimodular cones (stellar)."""
    gens = [list(g) for g in simplex]
    D = abs(int(mat_det(gens)))
    if D == 1:
        return [tuple(tuple(g) for g in gens)]
    r = len(gens)
    # search the half-open parallelepiped for a nonzero lattice point
    lo = [min(0, *(g[i] for g in gens)) for i in range(r)]
    hi = [max(0, *(g[i] for g in gens)) for i in range(r)]
    sums = [sum(g[i] for g in gens) for i in range(r)]
    lo = [min(l, s) for l, s in zip(lo, sums)]
    hi = [max(h, s) for h, s in zip(hi, sums)]
    best = None
    candidates = []

    def walk(i, x):
        if i == r:
            if any(x):
                candidates.append(tuple(x))
            return
        for v in range(lo[i], hi[i] + 1):
            walk(i + 1, x + [v])

    walk(0, [])
    for x in candidates:
        c = mat_solve([[gens[j][k] for j in range(r)] for k in range(r)], list(x))
        if c is None:
            continue
        if all(0 <= ci < 1 for ci in c):
            key = (sum(c), x)
            if best is None or key < best[0]:
                best = (key, x, c)
    assert best is not None, "fundamental parallelepiped point must exist"
    _, w, c = best
    out = []
    for k in range(r):
        if c[k] > 0:
            child = [g[:] for g in gens]
            child[k] = list(w)
            if mat_det(child) != 0:
                out.extend(_unimodularize([tuple(g) for g in child]))
    return out


def alpha(eff_cone: Cone, anti_k) -> Fraction:
    """alpha = lim_{t->1} (1-t)^r sum_{y in dual cone} t^<y, -K>, exactly.

    Computed as sum over a unimodular triangulation of the dual cone of
    prod_rays 1/<ray, -K>.
    """
    anti_k = tuple(int(x) for x in anti_k)
    if not eff_cone.interior_member(anti_k):
        raise ValueError("anticanonical class must be interior to the effective cone")
    dual = eff_cone.dual()
    total = Fraction(0)
    for simplex in _pulling_triangulation(dual.generators, dual.rank):
        for uni in _unimodularize(simplex):
            term = Fraction(1)
            for g in uni:
                w = _dot(g, anti_k)
                assert w > 0
                term /= w
            total += term
    return total


def alpha_series_value(eff_cone: Cone, anti_k, k: int, span_factor: int = 40) -> float:
    """Numeric-limit oracle: (1-t)^r * sum t^<y,-K> at t = 1 - 2^-k.

    Independent of the triangulation path: level counts come from a plain
    coin-count DP, which requires the effective cone to be generated by a
    lattice basis (true for every built-in variety).  Raises otherwise.
    """
    import numpy as np

    gens = eff_cone.extreme_rays()
    r = eff_cone.rank
    if len(gens) != r or abs(int(mat_det(list(gens)))) != 1:
        raise ValueError("series oracle needs a basis-generated effective cone")
    inv = mat_inverse(list(zip(*gens)))
    weights = []
    for row in inv:
        w = _dot(row, anti_k)
        assert w == int(w) and w > 0
        weights.append(int(w))
    eps = 2.0**-k
    M = int(span_factor * 2**k)
    c = np.zeros(M + 1, dtype=np.float64)
    c[0] = 1.0
    for w in weights:
        for rdx in range(w):
            c[rdx::w] = np.cumsum(c[rdx::w])
    t = 1.0 - eps
    total = 0.0
    chunk = 1 << 20
    window = t ** np.arange(chunk, dtype=np.float64)
    for lo in range(0, M + 1, chunk):
        hi = min(lo + chunk, M + 1)
        total += (t ** lo) * float(np.dot(c[lo:hi], window[: hi - lo]))
    return (1.0 - t) ** r * total


def delta(anti_k) -> int:
    """Largest d with -K in d * Pic: the gcd of the coordinates."""
    anti_k = [int(x) for x in anti_k]
    if all(x == 0 for x in anti_k):
        raise ValueError("delta of the zero vector is undefined")
    g = 0
    for x in anti_k:
        g = gcd(g, abs(x))
    return g


def enumerate_dual_points(eff_cone: Cone, anti_k, m: int, extra=()):
    """All y in dual(C_eff) with <y,-K> = m and <y,D> >= c for (D,c) in extra.

    Finiteness follows from -K being interior to C_eff (validated here);
    output is exhaustive, in lexicographic order.
    """
    anti_k = tuple(int(x) for x in anti_k)
    if not eff_cone.interior_member(anti_k):
        raise ValueError("anticanonical class not interior: dual point set is infinite")
    if m < 0:
        return []
    rank = eff_cone.rank
    gens = eff_cone.generators
    dual = eff_cone.dual()
    # vertices of {y in dual: <y,-K> = m} are the scaled dual rays
    lo = [Fraction(0)] * rank
    hi = [Fraction(0)] * rank
    for ray in dual.generators:
        w = _dot(ray, anti_k)
        assert w > 0
        for i in range(rank):
            v = Fraction(m * ray[i], w)
            lo[i] = min(lo[i], v)
            hi[i] = max(hi[i], v)
    lo = [ceil(x) for x in lo]
    hi = [floor(x) for x in hi]
    extra = [(tuple(int(x) for x in d), int(c)) for d, c in extra]
    out = []

    def rec(i, y):
        if i == rank:
            if _dot(y, anti_k) != m:
                return
            if any(_dot(g, y) < 0 for g in gens):
                return
            if any(_dot(d, y) < c for d, c in extra):
                return
            out.append(tuple(y))
            return
        for v in range(lo[i], hi[i] + 1):
            rec(i + 1, y + [v])

    rec(0, [])
    return out
