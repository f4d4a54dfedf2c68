"""Twisted Alexander polynomials of knots under finite-group representations,
the TAV group classifier, and TAV-order search with checkable certificates."""

__version__ = "0.1.0"

from .laurent import LaurentPoly, PolyMatrix, lp_unit_normalize  # noqa: E402,F401
from .groups import FiniteGroup, Permutation, classify_tav  # noqa: E402,F401
from .knots import KnotPresentation, load_knot_table  # noqa: E402,F401
from .catalog import load_catalog  # noqa: E402,F401
