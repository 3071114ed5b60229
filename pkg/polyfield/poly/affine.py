"""
Polynomials whose coefficients are affine in the decision variables.

The candidate vector field, its derivatives, its compositions with symmetry
maps and every SOS target are AffinePoly values. A coefficient is stored as a
sparse linear expression ``{variable index: weight}`` where the key
``CONSTANT`` holds the offset.
"""

from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from ..errors import DimensionMismatchError, IndexOutOfRangeError
from .monomial import Monomial, graded_lex_key
from .polynomial import ZERO_TOL, MultiPoly

CONSTANT = -1

LinearExpr = Dict[int, float]


def _clean_expr(expr: Mapping[int, float]) -> LinearExpr:
    return {k: float(v) for k, v in expr.items() if abs(v) >= ZERO_TOL}


def add_exprs(a: Mapping[int, float], b: Mapping[int, float], scale: float = 1.0) -> LinearExpr:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0.0) + scale * v
    return _clean_expr(out)


class AffinePoly:
    """
    Polynomial in n variables with coefficients affine in decision variables.

    Examples:
        >>> from polyfield.poly import monomial_basis
        >>> basis = monomial_basis(1, 1)
        >>> p = AffinePoly.from_variables(1, basis, [0, 1])   # v0 + v1*x
        >>> p.evaluate_at([2.0])
        {0: 1.0, 1: 2.0}
    """

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, terms: Optional[Mapping[Monomial, Mapping[int, float]]] = None):
        self._n = n
        clean: Dict[Monomial, LinearExpr] = {}
        for monomial, expr in (terms or {}).items():
            if len(monomial) != n:
                raise DimensionMismatchError(
                    f"Monomial {monomial} does not have {n} exponents"
                )
            expr = _clean_expr(expr)
            if expr:
                clean[tuple(monomial)] = expr
        self._terms = dict(sorted(clean.items(), key=lambda kv: graded_lex_key(kv[0])))

    @classmethod
    def zero(cls, n: int) -> "AffinePoly":
        return cls(n)

    @classmethod
    def from_poly(cls, poly: MultiPoly) -> "AffinePoly":
        """Lift a concrete polynomial (no decision variables)."""
        return cls(poly.n, {m: {CONSTANT: c} for m, c in poly.terms.items()})

    @classmethod
    def from_variables(
        cls, n: int, basis: Sequence[Monomial], variables: Sequence[int]
    ) -> "AffinePoly":
        """The polynomial sum_k v[variables[k]] * basis[k]."""
        if len(basis) != len(variables):
            raise DimensionMismatchError(
                f"{len(variables)} variables for a basis of {len(basis)}"
            )
        return cls(n, {m: {v: 1.0} for m, v in zip(basis, variables)})

    @classmethod
    def from_components(cls, n: int, parts: Mapping[int, MultiPoly]) -> "AffinePoly":
        """Inverse of ``components``: sum of variable-weighted polynomials."""
        terms: Dict[Monomial, LinearExpr] = {}
        for key, poly in parts.items():
            for m, c in poly.terms.items():
                terms.setdefault(m, {})
                terms[m][key] = terms[m].get(key, 0.0) + c
        return cls(n, terms)

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> Dict[Monomial, LinearExpr]:
        return {m: dict(e) for m, e in self._terms.items()}

    def monomials(self) -> List[Monomial]:
        return list(self._terms)

    def coefficient(self, monomial: Monomial) -> LinearExpr:
        return dict(self._terms.get(tuple(monomial), {}))

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def decision_variables(self) -> List[int]:
        used = set()
        for expr in self._terms.values():
            used.update(k for k in expr if k != CONSTANT)
        return sorted(used)

    def is_constant(self) -> bool:
        """True when no decision variable appears."""
        return not self.decision_variables()

    def variables(self) -> List[int]:
        used = set()
        for monomial in self._terms:
            used.update(j for j, e in enumerate(monomial) if e)
        return sorted(used)

    def components(self) -> Dict[int, MultiPoly]:
        """Split into ``{variable: MultiPoly}`` with ``CONSTANT`` for the offset."""
        parts: Dict[int, Dict[Monomial, float]] = {}
        for m, expr in self._terms.items():
            for key, c in expr.items():
                parts.setdefault(key, {})[m] = c
        return {k: MultiPoly(self._n, t) for k, t in parts.items()}

    def _map_components(self, fn, n_out: Optional[int] = None) -> "AffinePoly":
        mapped = {k: fn(p) for k, p in self.components().items()}
        return AffinePoly.from_components(self._n if n_out is None else n_out, mapped)

    # Arithmetic

    def __add__(self, other) -> "AffinePoly":
        if isinstance(other, MultiPoly):
            other = AffinePoly.from_poly(other)
        if not isinstance(other, AffinePoly):
            return NotImplemented
        if other.n != self._n:
            raise DimensionMismatchError("Affine polynomials over different variables")
        terms = self.terms
        for m, expr in other._terms.items():
            terms[m] = add_exprs(terms.get(m, {}), expr)
        return AffinePoly(self._n, terms)

    __radd__ = __add__

    def scale(self, factor: float) -> "AffinePoly":
        return AffinePoly(
            self._n,
            {m: {k: v * factor for k, v in e.items()} for m, e in self._terms.items()},
        )

    def __neg__(self) -> "AffinePoly":
        return self.scale(-1.0)

    def __sub__(self, other) -> "AffinePoly":
        if isinstance(other, MultiPoly):
            other = AffinePoly.from_poly(other)
        if not isinstance(other, AffinePoly):
            return NotImplemented
        return self + (-other)

    def multiply(self, poly: MultiPoly) -> "AffinePoly":
        """Product with a concrete polynomial."""
        if poly.n != self._n:
            raise DimensionMismatchError("Affine polynomials over different variables")
        return self._map_components(lambda p: p * poly)

    def __mul__(self, other) -> "AffinePoly":
        if isinstance(other, MultiPoly):
            return self.multiply(other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(float(other))
        return NotImplemented

    __rmul__ = __mul__

    def differentiate(self, j: int) -> "AffinePoly":
        if not 0 <= j < self._n:
            raise IndexOutOfRangeError(f"Variable index {j} out of range for n={self._n}")
        return self._map_components(lambda p: p.differentiate(j))

    def compose_affine(self, M, b=None) -> "AffinePoly":
        M = np.atleast_2d(np.asarray(M, dtype=float))
        return self._map_components(lambda p: p.compose_affine(M, b), n_out=M.shape[1])

    def compose_linear(self, M) -> "AffinePoly":
        return self._map_components(lambda p: p.compose_linear(M))

    # Evaluation

    def evaluate_at(self, x) -> LinearExpr:
        """Linear expression obtained by fixing the polynomial variables at x."""
        point = np.asarray(x, dtype=float)
        if point.shape != (self._n,):
            raise DimensionMismatchError(
                f"Expected a point with {self._n} coordinates, got shape {point.shape}"
            )
        out: LinearExpr = {}
        for m, expr in self._terms.items():
            value = float(np.prod(point ** np.array(m, dtype=float)))
            out = add_exprs(out, expr, value)
        return out

    def substitute(self, values) -> MultiPoly:
        """Concrete polynomial for a given decision vector."""
        values = np.asarray(values, dtype=float)
        terms: Dict[Monomial, float] = {}
        for m, expr in self._terms.items():
            terms[m] = sum(
                v if k == CONSTANT else v * values[k] for k, v in expr.items()
            )
        return MultiPoly(self._n, terms)

    def __repr__(self) -> str:
        return f"AffinePoly({self._n}, {len(self._terms)} terms)"
