"""
Polynomial layer: monomial bases, sparse polynomials, polynomial vector
fields and polynomials with affine decision-variable coefficients.
"""

from .affine import CONSTANT, AffinePoly, LinearExpr, add_exprs
from .monomial import (
    Monomial,
    basis_size,
    graded_lex_key,
    monomial_basis,
    monomial_degree,
    restricted_basis,
    sort_monomials,
)
from .polynomial import ZERO_TOL, MultiPoly, PolyVec

__all__ = [
    "AffinePoly",
    "CONSTANT",
    "LinearExpr",
    "Monomial",
    "MultiPoly",
    "PolyVec",
    "ZERO_TOL",
    "add_exprs",
    "basis_size",
    "graded_lex_key",
    "monomial_basis",
    "monomial_degree",
    "restricted_basis",
    "sort_monomials",
]
