"""Liftings of finite-dimensional Nichols algebras of diagonal type.

Exact cyclotomic arithmetic, noncommutative Groebner bases, braided and
bosonized coproducts, and a solver for the deformed relations.
"""

from __future__ import annotations

from .bosonization import Realization, RealizationError, hopf_ideal_check
from .braided import BraidingMatrix
from .catalog import CaseFileError, load, load_file
from .cyclotomic import CycNum, make_root, order_of
from .freealg import NCPoly
from .lifting import LiftingCase, LiftingSolver, admissibility, flatness_check, run_case
from .ncgb import GBasis, buchberger

__version__ = "0.1.0"

__all__ = [
    "BraidingMatrix",
    "CaseFileError",
    "CycNum",
    "GBasis",
    "LiftingCase",
    "LiftingSolver",
    "NCPoly",
    "Realization",
    "RealizationError",
    "admissibility",
    "buchberger",
    "flatness_check",
    "hopf_ideal_check",
    "load",
    "load_file",
    "make_root",
    "order_of",
    "run_case",
]
