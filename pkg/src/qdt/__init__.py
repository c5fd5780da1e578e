"""Exact abelian quiver invariants and wall-crossing identities.

Values live in the rational functions of v = q^(1/2) with integer
coefficients (:mod:`qdt.exactalg`).  The main entry points are
:func:`qdt.abelian.f_enum`, :func:`qdt.wallcross.abelian_g` and the
verification routines of :mod:`qdt.wallcross`.
"""

from .exactalg import GM, ONE, ZERO, HalfLaurent, RatFunc
from .quiver import Quiver
from .stability import Stability

__version__ = "0.1.0"

__all__ = ["HalfLaurent", "RatFunc", "Quiver", "Stability", "GM", "ONE", "ZERO"]
