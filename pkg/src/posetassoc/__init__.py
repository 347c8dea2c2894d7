"""Poset associahedra: tubing censuses, h- and gamma-polynomials, and exact
checks of the Narayana/Eulerian substitution identities."""

from .poset import Poset, build_poset, parse_poset_text
from .polyalg import BiPoly, IntPoly
from .tubings import enumerate_tubings, f_polynomial, gamma_of_poset, h_polynomial

__all__ = [
    "BiPoly",
    "IntPoly",
    "Poset",
    "build_poset",
    "enumerate_tubings",
    "f_polynomial",
    "gamma_of_poset",
    "h_polynomial",
    "parse_poset_text",
]
__version__ = "0.1.0"
