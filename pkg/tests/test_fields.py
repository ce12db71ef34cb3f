import random

import pytest

from maninlab.fields import (
    NEG_INF,
    all_polys,
    factorization_table,
    field_make,
    monic_irreducibles,
    poly_deg,
    poly_divmod,
    poly_eval,
    poly_factor,
    poly_gcd,
    poly_is_irreducible,
    poly_mul,
)
from maninlab.rhopoly import RhoPoly, rho_eval


def test_field_sizes_and_units():
    assert field_make(2, 1).q == 2
    F4 = field_make(2, 2)
    assert F4.q == 4
    assert all(F4.pow(x, 3) == 1 for x in range(1, 4))


def test_frobenius_fixed_points_f9():
    F9 = field_make(3, 2)
    fixed = [x for x in F9.elements() if F9.pow(x, 3) == x]
    assert len(fixed) == 3


def test_field_make_errors():
    with pytest.raises(ValueError):
        field_make(4, 1)
    with pytest.raises(ValueError):
        field_make(2, 25)  # 2^25 over the size cap


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3)])
def test_field_axioms_randomized(p, f):
    F = field_make(p, f)
    rng = random.Random(1729 + p * 10 + f)
    for _ in range(200):
        a, b, c = (rng.randrange(F.q) for _ in range(3))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in range(1, F.q):
        assert F.mul(a, F.inv(a)) == 1


def test_poly_basics():
    F2 = field_make(2)
    assert poly_gcd(F2, (0, 1, 1), (0, 1)) == (0, 1)  # gcd(x^2+x, x) = x
    assert poly_is_irreducible(F2, (1, 1, 1))          # x^2+x+1
    assert poly_eval(F2, (1, 0, 1), 1) == 0            # x^2+1 at 1
    assert poly_deg(()) == NEG_INF
    assert poly_deg((1,)) == 0


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (2, 2)])
def test_factor_roundtrip_randomized(p, f):
    F = field_make(p, f)
    rng = random.Random(41 + p + f)
    pool = all_polys(F, 8, nonzero=True)
    for _ in range(200):
        a = rng.choice(pool)
        unit, factors = poly_factor(F, a)
        prod = (unit,)
        for g, m in factors:
            for _ in range(m):
                prod = poly_mul(F, prod, g)
        assert prod == a
        assert all(poly_is_irreducible(F, g) for g, _ in factors)


def test_gcd_divides_both_and_is_greatest():
    F3 = field_make(3)
    rng = random.Random(7)
    pool = all_polys(F3, 5, nonzero=True)
    for _ in range(100):
        a, b = rng.choice(pool), rng.choice(pool)
        g = poly_gcd(F3, a, b)
        assert not poly_divmod(F3, a, g)[1]
        assert not poly_divmod(F3, b, g)[1]
        # any common divisor divides g
        for c, _ in poly_factor(F3, a)[1]:
            if not poly_divmod(F3, b, c)[1]:
                assert not poly_divmod(F3, g, c)[1]


def test_defining_polynomials_are_irreducible():
    for p, f in [(2, 4), (3, 3), (5, 2), (7, 2)]:
        F = field_make(p, f)
        base = field_make(p, 1)
        assert poly_is_irreducible(base, F.modulus)


def test_monic_irreducible_sieve_counts():
    # over F_2: 1 quadratic (x^2+x+1), 2 cubics
    irr2 = [g for g in monic_irreducibles((2, 1), 3) if len(g) - 1 == 2]
    irr3 = [g for g in monic_irreducibles((2, 1), 3) if len(g) - 1 == 3]
    assert len(irr2) == 1 and len(irr3) == 2


def test_factorization_table_consistency():
    F = field_make(2)
    table = factorization_table((2, 1), 4)
    for monic, factors in table.items():
        prod = (1,)
        for g, m in factors:
            for _ in range(m):
                prod = poly_mul(F, prod, g)
        assert prod == monic


def test_rho_eval_examples():
    assert rho_eval(RhoPoly((-1, 1)), 2) == 1       # rho - 1 at 2
    assert rho_eval(RhoPoly((0, 1, 1)), 3) == 12    # rho^2 + rho at 3
    assert rho_eval(RhoPoly(()), 5) == 0
    assert RhoPoly(()).degree() == NEG_INF
    assert (RhoPoly((1, 2)) * RhoPoly((0, 1))).coeffs == (0, 1, 2)
