"""Integer polynomials in the formal mark rho.

These carry the coefficients of the min-type generating series; evaluation
at rho = q produces exact rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import NEG_INF


class RhoPoly:
    """Immutable integer polynomial in rho, coefficients low->high."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, *a):
        raise AttributeError("RhoPoly is immutable")

    @staticmethod
    def zero() -> "RhoPoly":
        return RhoPoly()

    @staticmethod
    def monomial(k: int, c: int = 1) -> "RhoPoly":
        return RhoPoly((0,) * k + (c,))

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "RhoPoly") -> "RhoPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return RhoPoly(
            (self.coeffs[i] if i < len(self.coeffs) else 0)
            + (other.coeffs[i] if i < len(other.coeffs) else 0)
            for i in range(n)
        )

    def __neg__(self) -> "RhoPoly":
        return RhoPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RhoPoly") -> "RhoPoly":
        return self + (-other)

    def __mul__(self, other: "RhoPoly") -> "RhoPoly":
        if self.is_zero() or other.is_zero():
            return RhoPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RhoPoly(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, RhoPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "RhoPoly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*rho^{k}" if k else str(c))
        return "RhoPoly(" + " + ".join(terms) + ")"

    def eval_int(self, q: int) -> int:
        r = 0
        for c in reversed(self.coeffs):
            r = r * q + c
        return r


def rho_eval(P: RhoPoly, q: int) -> Fraction:
    """Exact value of P at rho = q, as a rational."""
    return Fraction(P.eval_int(q))
