"""Exact linear algebra over Q (fractions) and over F_q.

Matrices are lists of lists.  Everything here runs at rank <= ~10, so the
implementations favour clarity and determinism over asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def frac_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def mat_rank(rows) -> int:
    m = frac_matrix(rows)
    if not m:
        return 0
    nr, nc = len(m), len(m[0])
    rank = 0
    row = 0
    for col in range(nc):
        piv = None
        for r in range(row, nr):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = Fraction(1) / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(nr):
            if r != row and m[r][col] != 0:
                c = m[r][col]
                m[r] = [x - c * y for x, y in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == nr:
            break
    return rank


def mat_det(rows) -> Fraction:
    m = frac_matrix(rows)
    n = len(m)
    if n == 0:
        return Fraction(1)
    assert all(len(r) == n for r in m)
    det = Fraction(1)
    for i in range(n):
        piv = None
        for r in range(i, n):
            if m[r][i] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        inv = Fraction(1) / m[i][i]
        for r in range(i + 1, n):
            if m[r][i] != 0:
                c = m[r][i] * inv
                m[r] = [x - c * y for x, y in zip(m[r], m[i])]
    return det


def mat_solve(rows, rhs):
    """Solve A x = b exactly; returns None if inconsistent.

    A is len(rows) x n; when the system is underdetermined an arbitrary
    (deterministic) solution is returned.
    """
    m = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    if not m:
        return []
    nr, nc = len(m), len(m[0]) - 1
    pivots = []
    row = 0
    for col in range(nc):
        piv = None
        for r in range(row, nr):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = Fraction(1) / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(nr):
            if r != row and m[r][col] != 0:
                c = m[r][col]
                m[r] = [x - c * y for x, y in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == nr:
            break
    for r in range(row, nr):
        if m[r][nc] != 0:
            return None
    x = [Fraction(0)] * nc
    for r, col in enumerate(pivots):
        x[col] = m[r][nc]
    return x


def mat_inverse(rows):
    n = len(rows)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(rows)]
    for i in range(n):
        piv = None
        for r in range(i, n):
            if m[r][i] != 0:
                piv = r
                break
        if piv is None:
            raise ValueError("matrix is singular")
        m[i], m[piv] = m[piv], m[i]
        inv = Fraction(1) / m[i][i]
        m[i] = [x * inv for x in m[i]]
        for r in range(n):
            if r != i and m[r][i] != 0:
                c = m[r][i]
                m[r] = [x - c * y for x, y in zip(m[r], m[i])]
    return [row[n:] for row in m]


def nullspace_q(rows):
    """Basis of the rational nullspace of A (list of Fraction vectors)."""
    m = frac_matrix(rows)
    if not m:
        return []
    nr, nc = len(m), len(m[0])
    pivots = []
    row = 0
    for col in range(nc):
        piv = None
        for r in range(row, nr):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = Fraction(1) / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(nr):
            if r != row and m[r][col] != 0:
                c = m[r][col]
                m[r] = [x - c * y for x, y in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == nr:
            break
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * nc
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def primitive_int_vector(v):
    """Scale a rational vector to a primitive integer vector (same ray)."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def int_adjugate(rows):
    """Adjugate of a square integer matrix: adj(A) @ A = det(A) * I."""
    n = len(rows)
    det = mat_det(rows)
    if det == 0:
        raise ValueError("singular matrix has no useful adjugate here")
    inv = mat_inverse(rows)
    adj = [[inv[i][j] * det for j in range(n)] for i in range(n)]
    out = [[int(x) for x in row] for row in adj]
    assert all(adj[i][j] == out[i][j] for i in range(n) for j in range(n))
    return out, int(det)


# ---------------------------------------------------------------------------
# linear algebra over F_q (field given as a maninlab.fields.Fq)
# ---------------------------------------------------------------------------

def gf_rank(F, rows) -> int:
    m = [list(r) for r in rows]
    if not m:
        return 0
    nr, nc = len(m), len(m[0])
    rank = 0
    row = 0
    for col in range(nc):
        piv = None
        for r in range(row, nr):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = F.inv(m[row][col])
        m[row] = [F.mul(inv, x) for x in m[row]]
        for r in range(nr):
            if r != row and m[r][col] != 0:
                c = m[r][col]
                m[r] = [F.sub(x, F.mul(c, y)) for x, y in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == nr:
            break
    return rank


def gf_nullspace(F, rows, ncols=None):
    """Nullspace basis over F_q; rows may be empty (pass ncols then)."""
    if not rows:
        assert ncols is not None
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    m = [list(r) for r in rows]
    nr, nc = len(m), len(m[0])
    pivots = []
    row = 0
    for col in range(nc):
        piv = None
        for r in range(row, nr):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = F.inv(m[row][col])
        m[row] = [F.mul(inv, x) for x in m[row]]
        for r in range(nr):
            if r != row and m[r][col] != 0:
                c = m[r][col]
                m[r] = [F.sub(x, F.mul(c, y)) for x, y in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == nr:
            break
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * nc
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = F.neg(m[r][fc])
        basis.append(tuple(v))
    return basis


def gf_solve_affine_count(F, rows, rhs):
    """Number of solutions of A x = b over F_q: q^nullity or 0."""
    if not rows:
        return 1 if all(b == 0 for b in rhs) else 0
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    nr, nc = len(m), len(m[0]) - 1
    row = 0
    for col in range(nc):
        piv = None
        for r in range(row, nr):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = F.inv(m[row][col])
        m[row] = [F.mul(inv, x) for x in m[row]]
        for r in range(nr):
            if r != row and m[r][col] != 0:
                c = m[r][col]
                m[r] = [F.sub(x, F.mul(c, y)) for x, y in zip(m[r], m[row])]
        row += 1
        if row == nr:
            break
    for r in range(row, nr):
        if m[r][nc] != 0:
            return 0
    return F.q ** (nc - row)
