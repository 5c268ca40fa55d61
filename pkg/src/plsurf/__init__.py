"""Exact PL path and surface signatures and a thin homotopy decision procedure."""

from .core import InputError
from .decide import DecisionReport, gen_example, is_null, thin_equiv
from .plpath import PLWord, reduce, word
from .plsurface import Kite, KiteWord, SurfaceSignature, surface_signature
from .tensor import TruncatedTensor, path_signature

__version__ = "0.1.0"

__all__ = [
    "DecisionReport",
    "InputError",
    "Kite",
    "KiteWord",
    "PLWord",
    "SurfaceSignature",
    "TruncatedTensor",
    "gen_example",
    "is_null",
    "path_signature",
    "reduce",
    "surface_signature",
    "thin_equiv",
    "word",
]
