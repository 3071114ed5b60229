"""
The candidate polynomial vector field p in P_d.
"""

from typing import Dict, List, Mapping, Optional

import numpy as np

from ..conic import ConicProgram, VariableRegistry
from ..errors import DimensionMismatchError, IndexOutOfRangeError
from ..poly import AffinePoly, LinearExpr, Monomial, MultiPoly, PolyVec, monomial_basis
from ..types import ConeKind


class CandidateParam:
    """
    Candidate field whose free components have one coefficient variable per
    monomial of degree <= d. Fixed components consume no variables.

    Examples:
        >>> from polyfield.conic import VariableRegistry
        >>> registry = VariableRegistry()
        >>> x2 = MultiPoly.variable(2, 1)
        >>> c = CandidateParam.declare(registry, 2, 5, fixed={0: x2})
        >>> registry.dimension
        21
    """

    def __init__(
        self,
        n: int,
        degree: int,
        components: List[AffinePoly],
        groups: Dict[int, str],
        fixed: Mapping[int, MultiPoly],
    ):
        self.n = n
        self.degree = degree
        self.basis: List[Monomial] = monomial_basis(n, degree)
        self._components = components
        self.groups = dict(groups)
        self.fixed = dict(fixed)

    @classmethod
    def declare(
        cls,
        registry: VariableRegistry,
        n: int,
        degree: int,
        fixed: Optional[Mapping[int, MultiPoly]] = None,
        name: str = "p",
    ) -> "CandidateParam":
        """Declare one free coefficient group per non-fixed component."""
        fixed = dict(fixed or {})
        for i, poly in fixed.items():
            if not 0 <= i < n:
                raise IndexOutOfRangeError(f"Fixed component {i} out of range for n={n}")
            if poly.n != n:
                raise DimensionMismatchError(f"Fixed component {i} is not over {n} variables")
        basis = monomial_basis(n, degree)
        components: List[AffinePoly] = []
        groups: Dict[int, str] = {}
        for i in range(n):
            if i in fixed:
                components.append(AffinePoly.from_poly(fixed[i]))
                continue
            group = registry.declare(f"{name}{i + 1}", ConeKind.FREE, len(basis))
            groups[i] = group.name
            components.append(AffinePoly.from_variables(n, basis, list(group.indices)))
        return cls(n, degree, components, groups, fixed)

    def component(self, i: int) -> AffinePoly:
        if not 0 <= i < self.n:
            raise IndexOutOfRangeError(f"Component {i} out of range for n={self.n}")
        return self._components[i]

    @property
    def components(self) -> List[AffinePoly]:
        return list(self._components)

    def is_fixed(self, i: int) -> bool:
        return i in self.fixed

    def free_components(self) -> List[int]:
        return [i for i in range(self.n) if i not in self.fixed]

    def evaluate_at(self, x) -> List[LinearExpr]:
        """Per-component linear expressions p_i(x)."""
        return [c.evaluate_at(x) for c in self._components]

    def realize(self, program: ConicProgram, x: np.ndarray) -> PolyVec:
        """Concrete field for a primal solution vector."""
        return PolyVec([c.substitute(x) for c in self._components])
