"""Exact-arithmetic toolkit for desk-scale verification of torsor-based
curve counting over F_q(t).

Everything downstream of the finite-field substrate is computed in exact
arithmetic (python ints, fractions.Fraction); floating point only appears
inside numeric cross-check oracles in the test suite, never in results.
"""

__version__ = "0.1.0"

from .fields import Fq, field_make
from .rhopoly import RhoPoly, rho_eval
from .lattice import Cone, cone_member, alpha, delta, enumerate_dual_points
from .fan import Fan, build_sigma_n, check_fan, gale_dual_cones
from .varieties import VarietyDescriptor, builtin_xn, builtin_dp6a2

__all__ = [
    "Fq",
    "field_make",
    "RhoPoly",
    "rho_eval",
    "Cone",
    "cone_member",
    "alpha",
    "delta",
    "enumerate_dual_points",
    "Fan",
    "build_sigma_n",
    "check_fan",
    "gale_dual_cones",
    "VarietyDescriptor",
    "builtin_xn",
    "builtin_dp6a2",
    "__version__",
]
