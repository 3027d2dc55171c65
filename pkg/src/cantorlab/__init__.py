"""Numerical laboratory for fat Cantor sets, prescribed-gradient graphs and fractional seminorms."""

from .geometry import BallDomain, BoxDomain, CantorScaffold, build_scaffold, make_schedule
from .kernels import BACKEND
from .lusin import build_lusin, heisenberg_datum, minimal_eta

__all__ = [
    "BACKEND",
    "BallDomain",
    "BoxDomain",
    "CantorScaffold",
    "build_lusin",
    "build_scaffold",
    "heisenberg_datum",
    "make_schedule",
    "minimal_eta",
]

__version__ = "0.1.0"
