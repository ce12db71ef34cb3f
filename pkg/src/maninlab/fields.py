"""Finite fields F_{p^f} and univariate polynomials over them.

Elements of F_{p^f} are encoded as integers in ``range(p**f)``: the integer
``c0 + c1*p + ... + c_{f-1}*p^(f-1)`` stands for the residue class
``c0 + c1*x + ...`` modulo the defining polynomial.  Extension fields use a
fixed bundled table of Conway polynomials so that the encoding is identical
across runs; for (p, f) outside the table the lexicographically smallest
monic irreducible is used, which is equally deterministic.

Polynomials are plain tuples of element codes, low degree first, with no
trailing zeros.  The zero polynomial is the empty tuple and its degree is
the explicit sentinel ``NEG_INF`` (never -1-as-an-integer).
"""

from __future__ import annotations

from functools import lru_cache
import itertools

import numpy as np

# degree of the zero polynomial / zero divisor
NEG_INF = float("-inf")

SIZE_CAP = 2**20

# Conway polynomials, coefficients low->high *excluding* the leading 1.
# Source convention: the standard Conway polynomial tables (deterministic,
# compatible with every major CAS).  Entries we actually exercise are
# re-verified for irreducibility at construction time.
_CONWAY = {
    (2, 2): (1, 1),
    (2, 3): (1, 1, 0),
    (2, 4): (1, 1, 0, 0),
    (2, 5): (1, 0, 1, 0, 0),
    (2, 6): (1, 1, 0, 1, 1, 0),
    (2, 7): (1, 1, 0, 0, 0, 0, 0),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0),
    (2, 9): (1, 0, 0, 0, 1, 0, 1, 0, 0),
    (2, 10): (1, 1, 1, 1, 0, 1, 1, 0, 0, 0),
    (3, 2): (2, 2),
    (3, 3): (1, 2, 0),
    (3, 4): (2, 0, 0, 2),
    (3, 5): (1, 2, 0, 0, 0),
    (3, 6): (2, 2, 1, 0, 2, 0),
    (5, 2): (2, 4),
    (5, 3): (3, 3, 0),
    (5, 4): (2, 4, 4, 0),
    (7, 2): (3, 6),
    (7, 3): (4, 0, 6),
    (11, 2): (2, 7),
    (13, 2): (2, 12),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


def _smallest_irreducible(p: int, f: int) -> tuple:
    """Lex-smallest monic irreducible of degree f over F_p (low->high tail)."""
    base = Fq(p, 1)
    for tail in itertools.product(range(p), repeat=f):
        poly = tuple(tail) + (1,)
        if poly_is_irreducible(base, poly):
            return tail
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class Fq:
    """The finite field F_{p^f} as a calculator on integer element codes."""

    def __init__(self, p: int, f: int = 1):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if f < 1:
            raise ValueError("extension degree must be >= 1")
        if p**f > SIZE_CAP:
            raise ValueError(f"field size {p}^{f} exceeds cap {SIZE_CAP}")
        self.p = p
        self.f = f
        self.q = p**f
        if f == 1:
            self.modulus = None
        else:
            tail = _CONWAY.get((p, f))
            if tail is None:
                tail = _smallest_irreducible(p, f)
            self.modulus = tuple(tail) + (1,)
            base = Fq(p, 1)
            assert poly_is_irreducible(base, self.modulus), (p, f)
        self._mul_table = None
        self._add_table = None
        self._inv = None

    def __repr__(self):
        return f"Fq({self.p},{self.f})"

    def __eq__(self, other):
        return isinstance(other, Fq) and (self.p, self.f) == (other.p, other.f)

    def __hash__(self):
        return hash(("Fq", self.p, self.f))

    # -- element encoding ------------------------------------------------
    def _vec(self, a: int) -> list:
        v = []
        for _ in range(self.f):
            v.append(a % self.p)
            a //= self.p
        return v

    def _unvec(self, v) -> int:
        a = 0
        for c in reversed(v):
            a = a * self.p + (c % self.p)
        return a

    def elements(self):
        return range(self.q)

    def from_int(self, n: int) -> int:
        """Image of the rational integer n under Z -> F_q (prime subfield)."""
        return n % self.p

    # -- arithmetic -------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        va, vb = self._vec(a), self._vec(b)
        return self._unvec([(x + y) % self.p for x, y in zip(va, vb)])

    def neg(self, a: int) -> int:
        if self.f == 1:
            return (-a) % self.p
        return self._unvec([(-x) % self.p for x in self._vec(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a * b) % self.p
        va, vb = self._vec(a), self._vec(b)
        prod = [0] * (2 * self.f - 1)
        for i, x in enumerate(va):
            if x:
                for j, y in enumerate(vb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        # reduce modulo the defining polynomial
        mod = self.modulus
        for k in range(len(prod) - 1, self.f - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for j in range(self.f):
                    prod[k - self.f + j] = (prod[k - self.f + j] - c * mod[j]) % self.p
        return self._unvec(prod[: self.f])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        r, b = 1, a
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        if self.f == 1:
            return pow(a, self.p - 2, self.p)
        if self._inv is None:
            self._inv = {}
        r = self._inv.get(a)
        if r is None:
            r = self.pow(a, self.q - 2)
            self._inv[a] = r
        return r

    # -- numpy tables (consumed by the counting kernels) ------------------
    def mul_table(self) -> np.ndarray:
        if self._mul_table is None:
            if self.f == 1:
                v = np.arange(self.q, dtype=np.int64)
                self._mul_table = (v[:, None] * v[None, :]) % self.p
            else:
                t = np.zeros((self.q, self.q), dtype=np.int64)
                for a in range(self.q):
                    for b in range(a, self.q):
                        t[a, b] = t[b, a] = self.mul(a, b)
                self._mul_table = t
        return self._mul_table

    def add_table(self) -> np.ndarray:
        if self._add_table is None:
            if self.f == 1:
                v = np.arange(self.q, dtype=np.int64)
                self._add_table = (v[:, None] + v[None, :]) % self.p
            else:
                t = np.zeros((self.q, self.q), dtype=np.int64)
                for a in range(self.q):
                    for b in range(a, self.q):
                        t[a, b] = t[b, a] = self.add(a, b)
                self._add_table = t
        return self._add_table


@lru_cache(maxsize=None)
def field_make(p: int, f: int = 1) -> Fq:
    """Construct (and cache) the field with p^f elements."""
    return Fq(p, f)


def field_for_order(q: int) -> Fq:
    """The field with q elements, for q a prime power."""
    for p in range(2, int(q**0.5) + 1):
        if is_prime(p) and q % p == 0:
            f = 0
            m = q
            while m % p == 0:
                m //= p
                f += 1
            if m != 1:
                break
            return field_make(p, f)
    if is_prime(q):
        return field_make(q, 1)
    raise ValueError(f"{q} is not a prime power")


def is_prime_power(q: int) -> bool:
    try:
        field_for_order(q)
        return True
    except ValueError:
        return False


# ---------------------------------------------------------------------------
# polynomials over F_q: tuples of element codes, low degree first
# ---------------------------------------------------------------------------

ZERO_POLY: tuple = ()


def poly_trim(c) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_deg(a: tuple):
    """Degree; NEG_INF for the zero polynomial."""
    return len(a) - 1 if a else NEG_INF


def poly_add(F: Fq, a: tuple, b: tuple) -> tuple:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(F.add(x, y))
    return poly_trim(out)


def poly_neg(F: Fq, a: tuple) -> tuple:
    return tuple(F.neg(x) for x in a)


def poly_sub(F: Fq, a: tuple, b: tuple) -> tuple:
    return poly_add(F, a, poly_neg(F, b))


def poly_scale(F: Fq, c: int, a: tuple) -> tuple:
    if c == 0:
        return ZERO_POLY
    return poly_trim([F.mul(c, x) for x in a])


def poly_mul(F: Fq, a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ZERO_POLY
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(out)


def poly_pow(F: Fq, a: tuple, e: int) -> tuple:
    r = (1,)
    for _ in range(e):
        r = poly_mul(F, r, a)
    return r


def poly_divmod(F: Fq, a: tuple, b: tuple):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = F.inv(b[-1])
    while len(a) >= len(b) and poly_trim(a):
        a = list(poly_trim(a))
        if len(a) < len(b):
            break
        c = F.mul(a[-1], inv_lead)
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] = F.sub(a[k + i], F.mul(c, y))
    return poly_trim(q), poly_trim(a)


def poly_monic(F: Fq, a: tuple) -> tuple:
    if not a:
        return a
    return poly_scale(F, F.inv(a[-1]), a)


def poly_gcd(F: Fq, a: tuple, b: tuple) -> tuple:
    """Monic gcd (the gcd convention used everywhere downstream)."""
    while b:
        _, r = poly_divmod(F, a, b)
        a, b = b, r
    return poly_monic(F, a)


def poly_eval(F: Fq, a: tuple, x: int) -> int:
    r = 0
    for c in reversed(a):
        r = F.add(F.mul(r, x), c)
    return r


def poly_from_int_coeffs(F: Fq, coeffs) -> tuple:
    return poly_trim([F.from_int(c) for c in coeffs])


@lru_cache(maxsize=None)
def monic_irreducibles(field_key, maxdeg: int):
    """All monic irreducibles of degree <= maxdeg over F_q, by (degree, code)."""
    F = field_make(*field_key)
    irr = []
    for d in range(1, maxdeg + 1):
        for tail in itertools.product(F.elements(), repeat=d):
            poly = tuple(tail) + (1,)
            if all(
                poly_divmod(F, poly, g)[1] for g in irr if len(g) - 1 <= d // 2
            ):
                irr.append(poly)
    return tuple(irr)


def poly_is_irreducible(F: Fq, a: tuple) -> bool:
    d = len(a) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    for g in monic_irreducibles((F.p, F.f), d // 2):
        if not poly_divmod(F, a, g)[1]:
            return False
    return True


def poly_factor(F: Fq, a: tuple):
    """Factor a nonzero polynomial into (unit, [(monic irreducible, mult)]).

    Trial division against the sieve of monic irreducibles; fine at desk
    scale (degrees <= ~16 over small fields).
    """
    if not a:
        raise ValueError("cannot factor the zero polynomial")
    unit = a[-1]
    a = poly_monic(F, a)
    factors = []
    d = len(a) - 1
    # trial division by irreducibles of degree <= d/2; the leftover is prime
    for g in monic_irreducibles((F.p, F.f), max(1, d // 2)):
        if len(g) - 1 > len(a) - 1:
            break
        m = 0
        while True:
            q, r = poly_divmod(F, a, g)
            if r:
                break
            a = q
            m += 1
        if m:
            factors.append((g, m))
        if len(a) == 1:
            break
    if len(a) > 1:
        factors.append((a, 1))
        factors.sort(key=lambda gm: (len(gm[0]), gm[0]))
    return unit, factors


@lru_cache(maxsize=None)
def factorization_table(field_key, maxdeg: int):
    """Map monic poly -> factor list, for every monic poly of degree <= maxdeg."""
    F = field_make(*field_key)
    table = {}
    for d in range(0, maxdeg + 1):
        for tail in itertools.product(F.elements(), repeat=d):
            poly = tuple(tail) + (1,) if d else (1,)
            if poly in table:
                continue
            table[poly] = poly_factor(F, poly)[1]
    return table


def all_polys(F: Fq, maxdeg: int, nonzero: bool = False):
    """All polynomials of degree <= maxdeg (deterministic order)."""
    out = []
    for code in range(F.q ** (maxdeg + 1)):
        c = []
        m = code
        for _ in range(maxdeg + 1):
            c.append(m % F.q)
            m //= F.q
        poly = poly_trim(c)
        if nonzero and not poly:
            continue
        out.append(poly)
    return out
