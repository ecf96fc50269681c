"""Toolkit for semi-local polynomial systems over finite fields.

Covers exact GF(p^m) arithmetic, sparse multivariate polynomials,
degree-bounded ideal closure and last fall degrees, closed/rational point
solvers for semi-local systems, Weil descent, the associated public-key
encryption schemes, and the determinant-of-Jacobian key recovery attack.
"""

from .field import FieldSpec, FieldElement, UniPoly, FieldError, embed

__all__ = ["FieldSpec", "FieldElement", "UniPoly", "FieldError", "embed"]

__version__ = "0.1.0"
