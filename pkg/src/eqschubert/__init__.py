"""Exact equivariant Schubert calculus in type A with positivity checks."""

from .permutation import Permutation
from .polyring import NotDivisible, Polynomial
from .positivity import NotTranslationInvariant, to_alpha, verify_all
from .schubert import build_table, get_table

__version__ = "0.1.0"

__all__ = [
    "NotDivisible",
    "NotTranslationInvariant",
    "Permutation",
    "Polynomial",
    "build_table",
    "get_table",
    "to_alpha",
    "verify_all",
]
