from .config import Config
from .errors import SpbwError
from .finring import (
    GF,
    FullMatrix,
    IntegerRing,
    PolyOverGF,
    Product,
    Quotient,
    Ring,
    Triangular,
    TrivialExt,
    Zmod,
    build_ring,
    nil_data,
)
from .presentation import Presentation, load_preset, parse_presentation
from .ringmaps import build_derivation, build_map, check_compatibility
from .spbwalg import ExtensionSpec, QuadRelation, SkewPoly

__version__ = '0.1.0'
__all__ = [
    'Config',
    'SpbwError',
    'Ring',
    'Zmod',
    'GF',
    'Quotient',
    'Triangular',
    'FullMatrix',
    'TrivialExt',
    'Product',
    'IntegerRing',
    'PolyOverGF',
    'build_ring',
    'nil_data',
    'build_map',
    'build_derivation',
    'check_compatibility',
    'ExtensionSpec',
    'QuadRelation',
    'SkewPoly',
    'Presentation',
    'parse_presentation',
    'load_preset',
]
