"""Polynomial pairs with a common root modulo N, built from geometric progressions."""

from .core import PolyPair, natural_skew, polys_from_gp, skew_search
from .errors import (ArgumentError, DegenerateGP, DegeneratePair, FactorFound, MontyError,
                     NotAGP)
from .gp import (GeometricProgression, GPParamsD2, GPParamsD3, build_gp_d2, build_gp_d3,
                 gp_from_polys, search_gp_d2, search_gp_d3, validate_gp)
from .poly import IntPoly, resultant

__all__ = [
    "ArgumentError", "DegenerateGP", "DegeneratePair", "FactorFound", "GPParamsD2",
    "GPParamsD3", "GeometricProgression", "IntPoly", "MontyError", "NotAGP", "PolyPair",
    "build_gp_d2", "build_gp_d3", "gp_from_polys", "natural_skew", "polys_from_gp",
    "resultant", "search_gp_d2", "search_gp_d3", "skew_search", "validate_gp",
]
