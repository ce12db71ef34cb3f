"""Cox-data model: descriptors, F-face combinatorics, incidence, mu^0.

A descriptor fixes generators s_i (i in I, their classes F_i a basis of
Pic), t_j (j in J), the single relation (linear in the t_j, or quasi-linear
with a t_1^2), the effective cone, and optionally the ambient fan.  All
support-pattern combinatorics run over bitmasks in the canonical variable
order s-generators first, then t-generators.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .fan import Fan, build_sigma_n
from .lattice import Cone, _dot
from .exactla import mat_rank, mat_solve

LINEAR = "linear"
QUASI_LINEAR = "quasi_linear_t1_squared"

POSITIVITY_EPS = Fraction(1, 1000)


def vadd(*vs):
    return tuple(sum(x) for x in zip(*vs))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, v):
    return tuple(c * x for x in v)


@dataclass
class VarietyDescriptor:
    name: str
    pic_basis: tuple              # basis labels, e.g. ("F0","F1",...)
    s_ids: tuple                  # labels of the s-generators (index set I)
    t_ids: tuple                  # labels of the t-generators (index set J)
    degrees: dict                 # label -> Pic vector (tuple of ints)
    shape: str                    # LINEAR or QUASI_LINEAR
    b: tuple                      # exponent matrix, rows = I, cols = J
    eff_generators: tuple         # generators of C_eff(X)
    fan: Fan | None = None
    explicit_rlv: tuple | None = None   # optional external Rlv (label lists)
    incidence_provenance: str = "derived"
    _cache: dict = field(default_factory=dict, repr=False)

    # -- basic structure ---------------------------------------------------
    @property
    def vars(self):
        return self.s_ids + self.t_ids

    @property
    def rank(self):
        return len(self.pic_basis)

    @property
    def dim(self):
        return len(self.t_ids) - 1

    def var_index(self, label: str) -> int:
        return self.vars.index(label)

    def eff_cone(self) -> Cone:
        if "eff_cone" not in self._cache:
            self._cache["eff_cone"] = Cone(self.eff_generators, self.rank)
        return self._cache["eff_cone"]

    def monomials(self):
        """Relation monomials as dicts label -> exponent (one per t_j)."""
        mons = []
        for jdx, tj in enumerate(self.t_ids):
            mon = {tj: 2 if (self.shape == QUASI_LINEAR and jdx == 0) else 1}
            for idx, si in enumerate(self.s_ids):
                e = self.b[idx][jdx]
                if e:
                    mon[si] = mon.get(si, 0) + e
            mons.append(mon)
        return mons

    def monomial_degree(self, mon) -> tuple:
        out = (0,) * self.rank
        for label, e in mon.items():
            out = vadd(out, vscale(e, self.degrees[label]))
        return out

    def d_tot(self) -> tuple:
        return self.monomial_degree(self.monomials()[0])

    def validate(self):
        if len(self.pic_basis) != len(self.s_ids):
            raise ValueError("s-generator classes must form a Pic basis")
        if mat_rank([list(self.degrees[s]) for s in self.s_ids]) != self.rank:
            raise ValueError("s-generator degrees are not a basis")
        degs = [self.monomial_degree(m) for m in self.monomials()]
        if len(set(degs)) != 1:
            raise ValueError(f"relation is not homogeneous: degrees {degs}")
        if self.shape not in (LINEAR, QUASI_LINEAR):
            raise ValueError(f"unknown relation shape {self.shape}")
        if self.shape == QUASI_LINEAR and len(self.t_ids) != 3:
            raise ValueError("the quasi-linear shape requires exactly 3 t-generators")
        mk = anticanonical(self)  # raises if not interior
        return mk

    def json_dict(self):
        d = {
            "name": self.name,
            "pic_basis": list(self.pic_basis),
            "s_generators": [{"id": s, "degree": list(self.degrees[s])} for s in self.s_ids],
            "t_generators": [{"id": t, "degree": list(self.degrees[t])} for t in self.t_ids],
            "relation": {"shape": self.shape, "b": [list(r) for r in self.b]},
            "effective_cone": [list(g) for g in self.eff_generators],
        }
        if self.explicit_rlv is not None:
            d["incidence"] = {
                "provenance": self.incidence_provenance,
                "rlv": [sorted(x) for x in self.explicit_rlv],
            }
        return d

    def descriptor_hash(self) -> str:
        blob = json.dumps(self.json_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def descriptor_from_json(d: dict) -> VarietyDescriptor:
    s_ids = tuple(g["id"] for g in d["s_generators"])
    t_ids = tuple(g["id"] for g in d["t_generators"])
    degrees = {g["id"]: tuple(g["degree"]) for g in d["s_generators"] + d["t_generators"]}
    inc = d.get("incidence")
    if inc is not None and inc.get("provenance") != "external":
        raise ValueError("explicit incidence data must declare provenance 'external'")
    v = VarietyDescriptor(
        name=d["name"],
        pic_basis=tuple(d["pic_basis"]),
        s_ids=s_ids,
        t_ids=t_ids,
        degrees=degrees,
        shape=d["relation"]["shape"],
        b=tuple(tuple(r) for r in d["relation"]["b"]),
        eff_generators=tuple(tuple(g) for g in d["effective_cone"]),
        explicit_rlv=tuple(frozenset(x) for x in inc["rlv"]) if inc else None,
        incidence_provenance=inc["provenance"] if inc else "derived",
    )
    v.validate()
    return v


def load_descriptor(path: str) -> VarietyDescriptor:
    with open(path) as fh:
        return descriptor_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# built-in varieties
# ---------------------------------------------------------------------------

def builtin_xn(n: int) -> VarietyDescriptor:
    """The intrinsic quadric X_n: Cox ring k[s_0..s_n, t_1..t_n]/(sum s_i t_i)."""
    if n < 3:
        raise ValueError("X_n requires n >= 3")
    pic = tuple(f"F{i}" for i in range(n + 1))
    s_ids = tuple(f"s{i}" for i in range(n + 1))
    t_ids = tuple(f"t{i}" for i in range(1, n + 1))
    degrees = {f"s{i}": tuple(1 if j == i else 0 for j in range(n + 1)) for i in range(n + 1)}
    for i in range(1, n + 1):
        v = [1] * (n + 1)
        v[i] -= 1
        degrees[f"t{i}"] = tuple(v)
    b = tuple(tuple(1 if (i == j + 1) else 0 for j in range(n)) for i in range(n + 1))
    v = VarietyDescriptor(
        name=f"xn:{n}",
        pic_basis=pic,
        s_ids=s_ids,
        t_ids=t_ids,
        degrees=degrees,
        shape=LINEAR,
        b=b,
        eff_generators=tuple(degrees[f"s{i}"] for i in range(n + 1)),
        fan=build_sigma_n(n),
    )
    v.validate()
    return v


def builtin_dp6a2() -> VarietyDescriptor:
    """Minimal desingularization of the degree-6 del Pezzo with an A2 point.

    Cox ring k[s_0..s_3, t_1..t_3]/(s_1 t_1^2 + s_2 t_2 + s_3 t_3) with
    G_1 = F0+F2+F3, G_2 = 2F0+F1+F2+2F3, G_3 = 2F0+F1+2F2+F3.  There is no
    bundled fan; the incidence data is derived from the GIT chamber of an
    ample witness in the interior of the moving cone (see `git_cov`).
    """
    degrees = {
        "s0": (1, 0, 0, 0),
        "s1": (0, 1, 0, 0),
        "s2": (0, 0, 1, 0),
        "s3": (0, 0, 0, 1),
        "t1": (1, 0, 1, 1),
        "t2": (2, 1, 1, 2),
        "t3": (2, 1, 2, 1),
    }
    b = (
        (0, 0, 0),
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
    )
    v = VarietyDescriptor(
        name="dp6a2",
        pic_basis=("F0", "F1", "F2", "F3"),
        s_ids=("s0", "s1", "s2", "s3"),
        t_ids=("t1", "t2", "t3"),
        degrees=degrees,
        shape=QUASI_LINEAR,
        b=b,
        eff_generators=((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
    )
    v.validate()
    return v


def get_variety(selector: str) -> VarietyDescriptor:
    if selector.startswith("xn:"):
        return builtin_xn(int(selector.split(":", 1)[1]))
    if selector == "dp6a2":
        return builtin_dp6a2()
    return load_descriptor(selector)


# ---------------------------------------------------------------------------
# adjunction
# ---------------------------------------------------------------------------

def anticanonical(v: VarietyDescriptor) -> tuple:
    """-K = sum F_i + sum G_j - D_tot; must be interior to C_eff."""
    mk = (0,) * v.rank
    for label in v.vars:
        mk = vadd(mk, v.degrees[label])
    mk = vsub(mk, v.d_tot())
    if not v.eff_cone().interior_member(mk):
        raise ValueError(f"anticanonical class {mk} not interior to the effective cone")
    return mk


# ---------------------------------------------------------------------------
# F-faces and incidence
# ---------------------------------------------------------------------------

def is_f_face(v: VarietyDescriptor, support) -> bool:
    """Support patterns realizable by points of Spec(Cox) over k-bar.

    For a single relation: restrict to the support; any number of surviving
    monomials other than exactly one can vanish with all coordinates
    nonzero.
    """
    support = frozenset(support)
    surviving = sum(1 for m in v.monomials() if set(m) <= support)
    return surviving != 1


def _mask_of(v: VarietyDescriptor, labels) -> int:
    m = 0
    for l in labels:
        m |= 1 << v.var_index(l)
    return m


def fan_cov(v: VarietyDescriptor):
    """Cov(Theta_Sigma): complements of maximal-cone ray label sets."""
    assert v.fan is not None
    all_labels = set(v.vars)
    cov = set()
    for mc in v.fan.maximal:
        cov.add(frozenset(all_labels - set(mc.gen_ids)))
    return sorted(cov, key=lambda s: sorted(s))


def git_cov(v: VarietyDescriptor):
    """Cov derived from GIT: minimal semistable supports for an ample witness.

    The witness D is a chamber-generic point in the interior of the moving
    cone Mov = intersection over a of cone(degrees except a); for surfaces
    Mov is the nef cone, so its interior consists of ample classes.  A
    support S is semistable iff D in cone(degrees over S).
    """
    degs = [v.degrees[l] for l in v.vars]
    n = len(degs)
    mov_parts = [Cone([d for j, d in enumerate(degs) if j != i], v.rank) for i in range(n)]
    normals = []
    for c in mov_parts:
        eqs, facets = c.hrep()
        if eqs:
            raise ValueError("moving cone computation hit a degenerate part")
        normals.extend(facets)
    # interior witness candidates: asymmetric weighted sums of the Mov rays
    # (deterministic; asymmetry steps off symmetry walls quickly)
    from .lattice import dd_from_inequalities
    lin, rays = dd_from_inequalities(normals, v.rank)
    if lin or not rays:
        raise ValueError("moving cone is degenerate")
    witness = None
    for k in range(2, 12):
        D = tuple(sum(k**i * r[c] for i, r in enumerate(rays)) for c in range(v.rank))
        if all(_dot(f, D) > 0 for f in normals) and _chamber_generic(v, degs, D):
            witness = D
            break
    if witness is None:
        raise ValueError("no chamber-generic ample witness found")
    v._cache["git_witness"] = witness
    semistable = []
    memo = {}
    for bits in range(1, 1 << n):
        S = frozenset(v.vars[i] for i in range(n) if bits >> i & 1)
        key = frozenset(i for i in range(n) if bits >> i & 1)
        if _cone_member_memo(memo, degs, key, witness, v.rank):
            semistable.append(S)
    minimal = [S for S in semistable
               if not any(T < S for T in semistable)]
    return sorted(minimal, key=lambda s: sorted(s)), witness


def _cone_member_memo(memo, degs, key, D, rank):
    got = memo.get(key)
    if got is None:
        got = Cone([degs[i] for i in sorted(key)], rank).member(D)
        memo[key] = got
    return got


def _chamber_generic(v, degs, D) -> bool:
    """D avoids every wall: not in any cone of degrees of rank < Pic rank."""
    n = len(degs)
    memo = {}
    for bits in range(1, 1 << n):
        key = frozenset(i for i in range(n) if bits >> i & 1)
        sub = [degs[i] for i in sorted(key)]
        if mat_rank([list(x) for x in sub]) >= v.rank:
            continue
        if _cone_member_memo(memo, degs, key, D, v.rank):
            return False
    return True


@dataclass
class RlvData:
    cov: tuple            # minimal admissible supports (frozensets of labels)
    rlv_masks: tuple      # bool per support mask: is an F-face over a cov elt
    semistable_masks: tuple  # bool per support mask: contains a cov elt
    disjoint_masks: tuple    # bool per mask m: some Rlv element inside m
    provenance: str

    def incidence(self, v: VarietyDescriptor, labels) -> bool:
        """Is the intersection of the divisors in `labels` nonempty?"""
        m = _mask_of(v, labels)
        full = (1 << len(v.vars)) - 1
        return bool(self.disjoint_masks[full & ~m])


def rlv_and_incidence(v: VarietyDescriptor) -> RlvData:
    """Rlv set and the incidence predicate of the divisor family.

    Priority: explicit descriptor data, then fan-derived Cov, then the GIT
    chamber route (used by the built-in dP6-A2 surface).
    """
    if "rlv" in v._cache:
        return v._cache["rlv"]
    n = len(v.vars)
    if v.explicit_rlv is not None:
        cov = sorted({frozenset(x) for x in v.explicit_rlv}, key=lambda s: sorted(s))
        provenance = v.incidence_provenance or "external"
    elif v.fan is not None:
        cov = fan_cov(v)
        provenance = "derived: fan ray-set complements"
    else:
        cov, witness = git_cov(v)
        provenance = f"derived: GIT ample chamber, witness {list(witness)}"
    cov_masks = [_mask_of(v, c) for c in cov]
    size = 1 << n
    semistable = [False] * size
    rlv = [False] * size
    for m in range(size):
        if any(cm & m == cm for cm in cov_masks):
            semistable[m] = True
            support = frozenset(v.vars[i] for i in range(n) if m >> i & 1)
            rlv[m] = is_f_face(v, support)
    # disjoint_masks[m] = exists Rlv element contained in m (subset-OR zeta)
    disj = list(rlv)
    for b in range(n):
        bit = 1 << b
        for m in range(size):
            if m & bit and disj[m ^ bit]:
                disj[m] = True
    data = RlvData(tuple(cov), tuple(rlv), tuple(semistable), tuple(disj), provenance)
    v._cache["rlv"] = data
    return data


def incidence(v: VarietyDescriptor, labels) -> bool:
    return rlv_and_incidence(v).incidence(v, labels)


def xn_incidence_readings(v: VarietyDescriptor) -> dict:
    """Candidate readings of the ambiguous emptiness claim for X_n.

    Returns which candidate intersections are empty, computed from Rlv;
    nothing is asserted about which reading was intended.
    """
    n = len(v.t_ids)
    data = rlv_and_incidence(v)
    readings = {
        "cap_all_G": data.incidence(v, [f"t{i}" for i in range(1, n + 1)]),
        "cap_all_F1n_and_G": data.incidence(
            v, [f"s{i}" for i in range(1, n + 1)] + [f"t{i}" for i in range(1, n + 1)]),
        "cap_everything": data.incidence(v, list(v.vars)),
        "pairwise_Fi_Gi": {i: data.incidence(v, [f"s{i}", f"t{i}"]) for i in range(1, n + 1)},
    }
    return readings


# ---------------------------------------------------------------------------
# the Moebius function mu^0
# ---------------------------------------------------------------------------

@dataclass
class Mu0Table:
    values: tuple      # mu^0 per {0,1}-pattern mask, canonical var order
    nvars: int

    def of_mask(self, m: int) -> int:
        return self.values[m]

    def of_pattern(self, alpha) -> int:
        """Pointwise mu^0 on N^(I u J): zero once any entry is >= 2."""
        if any(a >= 2 for a in alpha):
            return 0
        m = 0
        for i, a in enumerate(alpha):
            if a:
                m |= 1 << i
        return self.values[m]

    def nonzero_masks(self):
        return [m for m, x in enumerate(self.values) if x]


def mu0(v: VarietyDescriptor) -> Mu0Table:
    """mu^0 by Moebius inversion of the incidence indicator on {0,1}^(I u J)."""
    if "mu0" in v._cache:
        return v._cache["mu0"]
    data = rlv_and_incidence(v)
    n = len(v.vars)
    size = 1 << n
    full = size - 1
    inc = [1 if data.disjoint_masks[full & ~m] else 0 for m in range(size)]
    mu = list(inc)
    for b in range(n):
        bit = 1 << b
        for m in range(size):
            if m & bit:
                mu[m] -= mu[m ^ bit]
    table = Mu0Table(tuple(mu), n)
    v._cache["mu0"] = table
    return table


# ---------------------------------------------------------------------------
# positivity hypotheses
# ---------------------------------------------------------------------------

def _cone_coefficients(v: VarietyDescriptor, vec):
    """Coefficients of vec on the effective-cone generators (simplicial case)."""
    gens = v.eff_generators
    if len(gens) != v.rank:
        return None
    sol = mat_solve([list(col) for col in zip(*gens)], list(vec))
    return None if sol is None else [Fraction(x) for x in sol]


def _in_eff_nonzero(v: VarietyDescriptor, vec) -> bool:
    return v.eff_cone().member(vec) and any(x != 0 for x in vec)


def check_positivity(v: VarietyDescriptor) -> dict:
    """Cone-positivity hypothesis report.

    LINEAR: the consecutive-pair condition for the natural ordering and for
    all orderings of J, plus the interior condition
    (1/(|J|-1)) sum G_j - D_tot in C_eff \\ {0}.
    QUASI_LINEAR: the three dP6-A2 conditions, strict variants taken at
    eps = 1/1000 in exact rationals; a failure at that eps is reported as
    such, not as falsity of the hypothesis.
    """
    dtot = v.d_tot()
    G = {t: v.degrees[t] for t in v.t_ids}
    report = {"shape": v.shape, "conditions": [], "all_pass": True}

    def record(name, vec, ok_override=None):
        ok = _in_eff_nonzero(v, vec) if ok_override is None else ok_override
        coeffs = _cone_coefficients(v, vec)
        report["conditions"].append({
            "name": name,
            "vector": [str(x) for x in vec],
            "cone_coefficients": None if coeffs is None else [str(c) for c in coeffs],
            "pass": bool(ok),
        })
        report["all_pass"] &= bool(ok)
        return ok

    if v.shape == LINEAR:
        J = list(v.t_ids)
        pair_ok = {}
        for j1, j2 in itertools.combinations(J, 2):
            vec = vsub(vadd(G[j1], G[j2]), dtot)
            pair_ok[(j1, j2)] = pair_ok[(j2, j1)] = _in_eff_nonzero(v, vec)
        natural = all(pair_ok[(J[k], J[k + 1])] for k in range(len(J) - 1))
        record("hyp_pos natural ordering",
               vsub(vadd(G[J[0]], G[J[1]]), dtot), ok_override=natural)
        every = all(all(pair_ok[(o[k], o[k + 1])] for k in range(len(o) - 1))
                    for o in itertools.permutations(J))
        report["conditions"].append({"name": "hyp_pos all orderings", "pass": bool(every)})
        report["all_pass"] &= every
        inter = vsub(vscale(Fraction(1, len(J) - 1), vadd(*G.values())), dtot)
        record("interior condition sum G_j/(|J|-1) - D_tot", inter)
    else:
        eps = POSITIVITY_EPS
        t1, t2, t3 = v.t_ids
        record("item1a: G2+G3-Dtot", vsub(vadd(G[t2], G[t3]), dtot))
        record("item1b: G1+G2/2+G3/2-Dtot",
               vsub(vadd(G[t1], vscale(Fraction(1, 2), vadd(G[t2], G[t3]))), dtot))
        for i, j, k in itertools.permutations((t1, t2, t3), 3):
            if j > k:
                continue
            vec = vsub(vadd(vscale(1 - eps, G[i]),
                            vscale(Fraction(1, 2), vadd(G[j], G[k]))), dtot)
            record(f"item2: (1-eps){i} + ({j}+{k})/2 - Dtot at eps=1/1000", vec)
        vec = vsub(vscale(1 - eps, vadd(G[t2], G[t3])), dtot)
        record("item3: (1-eps)(G2+G3) - Dtot at eps=1/1000", vec)
    return report
