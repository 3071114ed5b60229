"""
Sparse multivariate polynomials and polynomial vector fields.

MultiPoly and PolyVec are immutable value types. Terms whose coefficient
falls below the configured zero tolerance are dropped on construction.
"""

from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import DEFAULT_CONFIG
from ..errors import BasisError, DimensionMismatchError, IndexOutOfRangeError
from .monomial import (
    Monomial,
    constant_monomial,
    graded_lex_key,
    multiply_monomials,
    unit_monomial,
)

ZERO_TOL = DEFAULT_CONFIG["POLY"]["ZERO_TOL"]

Scalar = Union[int, float]


def _normalize(terms: Mapping[Monomial, float]) -> Dict[Monomial, float]:
    return {m: float(c) for m, c in terms.items() if abs(c) >= ZERO_TOL}


class MultiPoly:
    """
    Sparse polynomial in n real variables.

    Examples:
        >>> x1 = MultiPoly.variable(2, 0)
        >>> x2 = MultiPoly.variable(2, 1)
        >>> p = x1 * x1 + x2
        >>> p.evaluate([2.0, 3.0])
        7.0
        >>> p.differentiate(0)
        MultiPoly(2, 2*x1)
    """

    __slots__ = ("_n", "_terms", "_arrays")

    def __init__(self, n: int, terms: Optional[Mapping[Monomial, float]] = None):
        if n < 1:
            raise DimensionMismatchError(f"Variable count must be at least 1, got {n}")
        clean = _normalize(terms or {})
        for monomial in clean:
            if len(monomial) != n:
                raise DimensionMismatchError(
                    f"Monomial {monomial} does not have {n} exponents"
                )
            if any(e < 0 for e in monomial):
                raise DimensionMismatchError(f"Negative exponent in {monomial}")
        self._n = n
        self._terms = dict(sorted(clean.items(), key=lambda kv: graded_lex_key(kv[0])))
        self._arrays: Optional[Tuple[np.ndarray, np.ndarray]] = None

    # Constructors

    @classmethod
    def zero(cls, n: int) -> "MultiPoly":
        return cls(n)

    @classmethod
    def constant(cls, n: int, value: float) -> "MultiPoly":
        return cls(n, {constant_monomial(n): value})

    @classmethod
    def variable(cls, n: int, j: int) -> "MultiPoly":
        """The coordinate polynomial x_j (0-based j)."""
        if not 0 <= j < n:
            raise IndexOutOfRangeError(f"Variable index {j} out of range for n={n}")
        return cls(n, {unit_monomial(n, j): 1.0})

    @classmethod
    def from_coefficients(
        cls, n: int, basis: Sequence[Monomial], coefficients: Iterable[float]
    ) -> "MultiPoly":
        """Rebuild a polynomial from a coefficient vector over ``basis``."""
        coefficients = list(coefficients)
        if len(coefficients) != len(basis):
            raise DimensionMismatchError(
                f"{len(coefficients)} coefficients for a basis of {len(basis)}"
            )
        terms: Dict[Monomial, float] = {}
        for monomial, c in zip(basis, coefficients):
            terms[monomial] = terms.get(monomial, 0.0) + float(c)
        return cls(n, terms)

    @classmethod
    def from_pairs(
        cls, pairs: Sequence[Sequence], n: Optional[int] = None
    ) -> "MultiPoly":
        """
        Deserialize from ``[[exponents, coefficient], ...]``.

        Args:
            pairs: Exponent/coefficient pairs
            n: Variable count; required for the zero polynomial

        Returns:
            The decoded MultiPoly
        """
        if n is None:
            if not pairs:
                raise DimensionMismatchError(
                    "Variable count is required to decode the zero polynomial"
                )
            n = len(pairs[0][0])
        terms: Dict[Monomial, float] = {}
        for exps, coef in pairs:
            monomial = tuple(int(e) for e in exps)
            terms[monomial] = terms.get(monomial, 0.0) + float(coef)
        return cls(n, terms)

    # Accessors

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> Dict[Monomial, float]:
        return dict(self._terms)

    def coefficient(self, monomial: Monomial) -> float:
        return self._terms.get(tuple(monomial), 0.0)

    def monomials(self) -> List[Monomial]:
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; the zero polynomial reports 0."""
        return max((sum(m) for m in self._terms), default=0)

    def variables(self) -> List[int]:
        """Indices of variables that occur with a positive exponent."""
        used = set()
        for monomial in self._terms:
            used.update(j for j, e in enumerate(monomial) if e)
        return sorted(used)

    def to_pairs(self) -> List[List]:
        return [[list(m), c] for m, c in self._terms.items()]

    # Evaluation

    def _exponent_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        if self._arrays is None:
            if self._terms:
                exps = np.array(list(self._terms.keys()), dtype=float)
                coefs = np.array(list(self._terms.values()), dtype=float)
            else:
                exps = np.zeros((0, self._n))
                coefs = np.zeros(0)
            self._arrays = (exps, coefs)
        return self._arrays

    def evaluate(self, x) -> Union[float, np.ndarray]:
        """
        Evaluate at one point (shape (n,)) or a batch of points (shape (N, n)).

        Raises:
            DimensionMismatchError: If the trailing dimension is not n
        """
        points = np.asarray(x, dtype=float)
        single = points.ndim == 1
        batch = np.atleast_2d(points)
        if batch.ndim != 2 or batch.shape[1] != self._n:
            raise DimensionMismatchError(
                f"Expected points with {self._n} coordinates, got shape {points.shape}"
            )
        exps, coefs = self._exponent_arrays()
        if not len(coefs):
            values = np.zeros(batch.shape[0])
        else:
            powers = np.prod(batch[:, None, :] ** exps[None, :, :], axis=2)
            values = powers @ coefs
        return float(values[0]) if single else values

    __call__ = evaluate

    # Calculus

    def differentiate(self, j: int) -> "MultiPoly":
        """Exact partial derivative with respect to x_j (0-based j)."""
        if not 0 <= j < self._n:
            raise IndexOutOfRangeError(
                f"Variable index {j} out of range for n={self._n}"
            )
        terms: Dict[Monomial, float] = {}
        for monomial, c in self._terms.items():
            e = monomial[j]
            if e == 0:
                continue
            lowered = monomial[:j] + (e - 1,) + monomial[j + 1 :]
            terms[lowered] = terms.get(lowered, 0.0) + c * e
        return MultiPoly(self._n, terms)

    def gradient(self) -> "PolyVec":
        return PolyVec([self.differentiate(j) for j in range(self._n)])

    # Arithmetic

    def _check(self, other: "MultiPoly") -> None:
        if other.n != self._n:
            raise DimensionMismatchError(
                f"Polynomials over {self._n} and {other.n} variables are incompatible"
            )

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return MultiPoly.constant(self._n, float(other))
        return NotImplemented

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, 0.0) + c
        return MultiPoly(self._n, terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return self.scale(-1.0)

    def __sub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def scale(self, factor: float) -> "MultiPoly":
        return MultiPoly(self._n, {m: c * factor for m, c in self._terms.items()})

    def multiply(self, other: "MultiPoly") -> "MultiPoly":
        """Exact product of two polynomials over the same variables."""
        self._check(other)
        terms: Dict[Monomial, float] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = multiply_monomials(ma, mb)
                terms[m] = terms.get(m, 0.0) + ca * cb
        return MultiPoly(self._n, terms)

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return self.multiply(other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("Negative powers are not polynomials")
        result = MultiPoly.constant(self._n, 1.0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # Composition

    def compose_affine(self, M, b=None) -> "MultiPoly":
        """
        Substitute x = M y + b.

        Args:
            M: Matrix of shape (n, m); the result lives in m variables
            b: Optional offset of length n

        Returns:
            q with q(y) = p(M y + b)
        """
        M = np.atleast_2d(np.asarray(M, dtype=float))
        if M.shape[0] != self._n:
            raise DimensionMismatchError(
                f"Substitution matrix must have {self._n} rows, got {M.shape}"
            )
        m = M.shape[1]
        offset = np.zeros(self._n) if b is None else np.asarray(b, dtype=float)
        if offset.shape != (self._n,):
            raise DimensionMismatchError(f"Offset must have length {self._n}")

        forms = []
        for i in range(self._n):
            terms = {unit_monomial(m, j): M[i, j] for j in range(m)}
            terms[constant_monomial(m)] = offset[i]
            forms.append(MultiPoly(m, terms))

        power_cache: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i: int, e: int) -> MultiPoly:
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = (
                    MultiPoly.constant(m, 1.0) if e == 0 else power(i, e - 1) * forms[i]
                )
            return power_cache[key]

        result = MultiPoly.zero(m)
        for monomial, c in self._terms.items():
            term = MultiPoly.constant(m, c)
            for i, e in enumerate(monomial):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def compose_linear(self, M) -> "MultiPoly":
        """
        Return q with q(x) = p(M x) for a square n x n matrix M.

        Examples:
            >>> swap = [[0, 1], [1, 0]]
            >>> MultiPoly.variable(2, 0).compose_linear(swap)
            MultiPoly(2, x2)
        """
        M = np.asarray(M, dtype=float)
        if M.shape != (self._n, self._n):
            raise DimensionMismatchError(
                f"Expected a {self._n}x{self._n} matrix, got shape {M.shape}"
            )
        return self.compose_affine(M)

    # Coefficients

    def coefficient_vector(self, basis: Sequence[Monomial]) -> np.ndarray:
        """
        Coefficients of this polynomial in the order of ``basis``.

        Raises:
            BasisError: If a monomial of the polynomial is not in ``basis``
        """
        index = {m: k for k, m in enumerate(basis)}
        out = np.zeros(len(basis))
        for monomial, c in self._terms.items():
            if monomial not in index:
                raise BasisError(f"Monomial {monomial} is not in the given basis")
            out[index[monomial]] = c
        return out

    # Comparison

    def max_coefficient_difference(self, other: "MultiPoly") -> float:
        self._check(other)
        diff = self - other
        return max((abs(c) for c in diff._terms.values()), default=0.0)

    def allclose(self, other: "MultiPoly", tol: float = 1e-9) -> bool:
        return self.max_coefficient_difference(other) <= tol

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._n, tuple(self._terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({self._n}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for monomial, c in self._terms.items():
            factors = [
                f"x{j + 1}" if e == 1 else f"x{j + 1}^{e}"
                for j, e in enumerate(monomial)
                if e
            ]
            if not factors:
                parts.append(f"{c:g}")
            elif c == 1.0:
                parts.append("*".join(factors))
            elif c == -1.0:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c:g}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


class PolyVec:
    """
    Polynomial vector field: n components over n variables.

    Examples:
        >>> x1, x2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
        >>> rotation = PolyVec([-x2, x1])
        >>> rotation.evaluate([0.0, 1.0])
        array([-1.,  0.])
    """

    __slots__ = ("_components",)

    def __init__(self, components: Sequence[MultiPoly]):
        components = list(components)
        if not components:
            raise DimensionMismatchError("A PolyVec needs at least one component")
        n = components[0].n
        if len(components) != n or any(c.n != n for c in components):
            raise DimensionMismatchError(
                f"A PolyVec over {n} variables needs {n} components over {n} variables"
            )
        self._components = tuple(components)

    @classmethod
    def zero(cls, n: int) -> "PolyVec":
        return cls([MultiPoly.zero(n) for _ in range(n)])

    @classmethod
    def from_pairs(cls, components: Sequence[Sequence], n: int) -> "PolyVec":
        return cls([MultiPoly.from_pairs(pairs, n) for pairs in components])

    @property
    def n(self) -> int:
        return len(self._components)

    @property
    def components(self) -> List[MultiPoly]:
        return list(self._components)

    def __getitem__(self, i: int) -> MultiPoly:
        return self._components[i]

    def __len__(self) -> int:
        return len(self._components)

    def __iter__(self):
        return iter(self._components)

    def degree(self) -> int:
        return max(c.degree() for c in self._components)

    def evaluate(self, x) -> np.ndarray:
        """Field values at one point (n,) or a batch (N, n)."""
        points = np.asarray(x, dtype=float)
        if points.ndim == 1:
            return np.array([c.evaluate(points) for c in self._components])
        return np.stack([c.evaluate(points) for c in self._components], axis=1)

    __call__ = evaluate

    def jacobian(self, x) -> np.ndarray:
        """Jacobian at one point (n, n) or a batch (N, n, n)."""
        points = np.asarray(x, dtype=float)
        rows = [
            [c.differentiate(j).evaluate(points) for j in range(self.n)]
            for c in self._components
        ]
        if points.ndim == 1:
            return np.array(rows, dtype=float)
        return np.transpose(np.array(rows, dtype=float), (2, 0, 1))

    def divergence(self) -> MultiPoly:
        total = MultiPoly.zero(self.n)
        for i, c in enumerate(self._components):
            total = total + c.differentiate(i)
        return total

    def compose_linear(self, M) -> "PolyVec":
        return PolyVec([c.compose_linear(M) for c in self._components])

    def coefficient_matrix(self, basis: Sequence[Monomial]) -> np.ndarray:
        return np.stack([c.coefficient_vector(basis) for c in self._components])

    def max_coefficient_difference(self, other: "PolyVec") -> float:
        return max(
            a.max_coefficient_difference(b)
            for a, b in zip(self._components, other._components)
        )

    def to_pairs(self) -> List[List[List]]:
        return [c.to_pairs() for c in self._components]

    def __add__(self, other: "PolyVec") -> "PolyVec":
        return PolyVec([a + b for a, b in zip(self._components, other._components)])

    def __sub__(self, other: "PolyVec") -> "PolyVec":
        return PolyVec([a - b for a, b in zip(self._components, other._components)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyVec):
            return NotImplemented
        return self._components == other._components

    def __hash__(self) -> int:
        return hash(self._components)

    def __repr__(self) -> str:
        return "PolyVec([" + ", ".join(str(c) for c in self._components) + "])"
