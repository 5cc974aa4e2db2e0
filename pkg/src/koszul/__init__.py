"""Exact calculus of Koszul cubes over localized polynomial rings."""

from .chain import ChainComplex, ChainMap
from .cube import Cube, CubeMorphism, h0, h0_iterated, is_koszul, restrict, total_complex, validate
from .errors import KoszulError, MathError, ParseError
from .linalg import LMatrix
from .normalize import normalize_simple
from .ring import BaseField, LocalRing, LocalScalar, RegularContext, is_unit, quotient_map
from .typical import TypicalType, make_typical, typ_direct_sum

__version__ = "0.1.0"

__all__ = [
    "BaseField", "ChainComplex", "ChainMap", "Cube", "CubeMorphism", "KoszulError", "LMatrix",
    "LocalRing", "LocalScalar", "MathError", "ParseError", "RegularContext", "TypicalType",
    "h0", "h0_iterated", "is_koszul", "is_unit", "make_typical", "normalize_simple",
    "quotient_map", "restrict", "total_complex", "typ_direct_sum", "validate",
]
