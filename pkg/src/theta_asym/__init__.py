"""Exact and asymptotic evaluation of rank, crank and Jacobi-theta coefficient statistics."""

from .precision import DEFAULT_DPS, get_precision, set_precision

set_precision(DEFAULT_DPS)

__version__ = "0.1.0"

__all__ = ["DEFAULT_DPS", "get_precision", "set_precision", "__version__"]
