"""Toric Calabi-Yau cone toolkit.

From a lattice polygon (a toric diagram) compute the moment-cone Hilbert
basis, Hilbert series, the exact volume function, the volume-minimising Reeb
field with a rationality certificate, and the Minkowski-decomposition data
that controls the versal deformations of the cone.
"""

from reebscope.exactmath import BigRat, IntMatrix, MultiPoly, RationalFunction3
from reebscope.polytope import LatticePolygon, from_vertices

__all__ = [
    "BigRat",
    "IntMatrix",
    "LatticePolygon",
    "MultiPoly",
    "RationalFunction3",
    "from_vertices",
]

__version__ = "0.1.0"
