"""
Side-information items.

Each dataclass wraps one family, delegating compilation to ``compilers`` and
measurement to ``residuals``. Component and variable indices are 0-based.
"""

from dataclasses import dataclass, field
from typing import Any, ClassVar, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..conic import Fragment, VariableRegistry
from ..poly import MultiPoly
from ..semialg import BasicSemialgebraicSet
from ..types import SideInfoTag
from . import residuals
from .base import CompiledSideInfo, ResidualReport, SideInfo
from .candidate import CandidateParam
from .compilers import (
    CompositeTerm,
    MonotoneRegion,
    SignRegion,
    compile_composite,
    compile_grad,
    compile_ham,
    compile_interp,
    compile_inv,
    compile_mon,
    compile_pos,
    compile_sym,
)


def _sets_to_json(sets: Sequence[BasicSemialgebraicSet]) -> List[Dict[str, Any]]:
    return [s.to_json() for s in sets]


def _sets_from_json(data: Sequence[Dict[str, Any]]) -> List[BasicSemialgebraicSet]:
    return [BasicSemialgebraicSet.from_json(d) for d in data]


def _with_degree(data: Dict[str, Any], degree: Optional[int]) -> Dict[str, Any]:
    if degree is not None:
        data["degree"] = degree
    return data


@dataclass
class Interp(SideInfo):
    """f(x_i) = y_i for every listed pair."""

    tag: ClassVar[SideInfoTag] = SideInfoTag.INTERP

    points: List[Tuple[List[float], List[float]]] = field(default_factory=list)

    def compile(self, candidate, registry, domain, name, default_degree=2):
        return CompiledSideInfo(
            name, self.tag, compile_interp(candidate, self.points, domain, name)
        )

    def residual(self, field, domain, resolution=50, potential_degree=None):
        return residuals.residual_interp(field, self.points, resolution)

    def to_json(self):
        return {
            "tag": self.tag.value,
            "points": [{"x": list(x), "y": list(y)} for x, y in self.points],
        }

    @classmethod
    def _decode(cls, data, n):
        return cls([(list(p["x"]), list(p["y"])) for p in data.get("points", [])])


@dataclass
class Sym(SideInfo):
    """f(sigma x) = rho f(x) for each listed generator (sigma, rho)."""

    tag: ClassVar[SideInfoTag] = SideInfoTag.SYM

    generators: List[Tuple[np.ndarray, np.ndarray]] = field(default_factory=list)

    def compile(self, candidate, registry, domain, name, default_degree=2):
        return CompiledSideInfo(name, self.tag, compile_sym(candidate, self.generators, name))

    def residual(self, field, domain, resolution=50, potential_degree=None):
        return residuals.residual_sym(field, self.generators, domain, resolution)

    def to_json(self):
        return {
            "tag": self.tag.value,
            "generators": [
                {"sigma": np.asarray(s).tolist(), "rho": np.asarray(r).tolist()}
                for s, r in self.generators
            ],
        }

    @classmethod
    def _decode(cls, data, n):
        return cls(
            [
                (np.array(g["sigma"], dtype=float), np.array(g["rho"], dtype=float))
                for g in data.get("generators", [])
            ]
        )


@dataclass
class Pos(SideInfo):
    """Sign of individual components on basic sets."""

    tag: ClassVar[SideInfoTag] = SideInfoTag.POS

    constraints: List[SignRegion] = field(default_factory=list)
    degree: Optional[int] = None

    def compile(self, candidate, registry, domain, name, default_degree=2):
        blocks = compile_pos(
            candidate, self.constraints, self.multiplier_degree(default_degree), registry, name
        )
        return CompiledSideInfo(name, self.tag, Fragment(name), blocks)

    def residual(self, field, domain, resolution=50, potential_degree=None):
        return residuals.residual_pos(field, self.constraints, domain, resolution)

    def to_json(self):
        return _with_degree(
            {
                "tag": self.tag.value,
                "constraints": [
                    {
                        "component": c.component,
                        "nonneg": _sets_to_json(c.nonneg),
                        "nonpos": _sets_to_json(c.nonpos),
                    }
                    for c in self.constraints
                ],
            },
            self.degree,
        )

    @classmethod
    def _decode(cls, data, n):
        return cls(
            [
                SignRegion(
                    int(c["component"]),
                    _sets_from_json(c.get("nonneg", [])),
                    _sets_from_json(c.get("nonpos", [])),
                )
                for c in data.get("constraints", [])
            ],
            data.get("degree"),
        )


@dataclass
class Mon(SideInfo):
    """Sign of partial derivatives df_i/dx_j on basic sets."""

    tag: ClassVar[SideInfoTag] = SideInfoTag.MON

    constraints: List[MonotoneRegion] = field(default_factory=list)
    degree: Optional[int] = None

    def compile(self, candidate, registry, domain, name, default_degree=2):
        blocks = compile_mon(
            candidate, self.constraints, self.multiplier_degree(default_degree), registry, name
        )
        return CompiledSideInfo(name, self.tag, Fragment(name), blocks)

    def residual(self, field, domain, resolution=50, potential_degree=None):
        return residuals.residual_mon(field, self.constraints, domain, resolution)

    def to_json(self):
        return _with_degree(
            {
                "tag": self.tag.value,
                "constraints": [
                    {
                        "component": c.component,
                        "variable": c.variable,
                        "nonneg": _sets_to_json(c.nonneg),
                        "nonpos": _sets_to_json(c.nonpos),
                    }
                    for c in self.constraints
                ],
            },
            self.degree,
        )

    @classmethod
    def _decode(cls, data, n):
        return cls(
            [
                MonotoneRegion(
                    int(c["component"]),
                    int(c["variable"]),
                    _sets_from_json(c.get("nonneg", [])),
                    _sets_from_json(c.get("nonpos", [])),
                )
                for c in data.get("constraints", [])
            ],
            data.get("degree"),
        )


@dataclass
class Inv(SideInfo):
    """Each listed set is invariant under the flow."""

    tag: ClassVar[SideInfoTag] = SideInfoTag.INV

    sets: List[BasicSemialgebraicSet] = field(default_factory=list)
    degree: Optional[int] = None

    def compile(self, candidate, registry, domain, name, default_degree=2):
        blocks = compile_inv(
            candidate, self.sets, self.multiplier_degree(default_degree), registry, domain, name
        )
        return CompiledSideInfo(name, self.tag, Fragment(name), blocks)

    def residual(self, field, domain, resolution=50, potential_degree=None):
        return residuals.residual_inv(field, self.sets, domain, resolution)

    def to_json(self):
        return _with_degree({"tag": self.tag.value, "sets": _sets_to_json(self.sets)}, self.degree)

    @classmethod
    def _decode(cls, data, n):
        return cls(_sets_from_json(data.get("sets", [])), data.get("degree"))


@dataclass
class Grad(SideInfo):
    """f = -grad V for some polynomial potential V."""

    tag: ClassVar[SideInfoTag] = SideInfoTag.GRAD

    def compile(self, candidate, registry, domain, name, default_degree=2):
        fragment, potential = compile_grad(candidate, registry, name)
        return CompiledSideInfo(name, self.tag, fragment, potential=potential)

    def residual(self, field, domain, resolution=50, potential_degree=None):
        return residuals.residual_grad(field, domain, resolution, potential_degree)

    def to_json(self):
        return {"tag": self.tag.value}

    @classmethod
    def _decode(cls, data, n):
        return cls()


@dataclass
class Ham(SideInfo):
    """Canonical Hamiltonian structure on the split x = (x_1..x_k, x_{k+1}..x_2k)."""

    tag: ClassVar[SideInfoTag] = SideInfoTag.HAM

    def compile(self, candidate, registry, domain, name, default_degree=2):
        fragment, potential = compile_ham(candidate, registry, name)
        return CompiledSideInfo(name, self.tag, fragment, potential=potential)

    def residual(self, field, domain, resolution=50, potential_degree=None):
        return residuals.residual_ham(field, domain, resolution, potential_degree)

    def to_json(self):
        return {"tag": self.tag.value}

    @classmethod
    def _decode(cls, data, n):
        return cls()


@dataclass
class Composite(SideInfo):
    """
    Sign of sum_t multiplier_t(x) * (d) f_{i_t}(x) on basic sets, for
    constraints mixing values and derivatives.

    Examples:
        Specific growth rate of N = x1 decreasing in N, i.e.
        N * df1/dN - f1 <= 0 on the domain:

        >>> from polyfield.semialg import box_set
        >>> N = MultiPoly.variable(2, 0)
        >>> rate = Composite(
        ...     [CompositeTerm(N, 0, 0), CompositeTerm(MultiPoly.constant(2, -1.0), 0)],
        ...     nonpos=[box_set([0, 0], [2, 2])],
        ... )
    """

    tag: ClassVar[SideInfoTag] = SideInfoTag.COMPOSITE

    terms: List[CompositeTerm] = field(default_factory=list)
    nonneg: List[BasicSemialgebraicSet] = field(default_factory=list)
    nonpos: List[BasicSemialgebraicSet] = field(default_factory=list)
    degree: Optional[int] = None

    def compile(self, candidate, registry, domain, name, default_degree=2):
        blocks = compile_composite(
            candidate,
            self.terms,
            self.nonneg,
            self.nonpos,
            self.multiplier_degree(default_degree),
            registry,
            name,
        )
        return CompiledSideInfo(name, self.tag, Fragment(name), blocks)

    def residual(self, field, domain, resolution=50, potential_degree=None):
        return residuals.residual_composite(
            field, self.terms, self.nonneg, self.nonpos, domain, resolution
        )

    def to_json(self):
        return _with_degree(
            {
                "tag": self.tag.value,
                "terms": [
                    {
                        "multiplier": t.multiplier.to_pairs(),
                        "component": t.component,
                        "derivative": t.derivative,
                    }
                    for t in self.terms
                ],
                "nonneg": _sets_to_json(self.nonneg),
                "nonpos": _sets_to_json(self.nonpos),
            },
            self.degree,
        )

    @classmethod
    def _decode(cls, data, n):
        return cls(
            [
                CompositeTerm(
                    MultiPoly.from_pairs(t["multiplier"], n),
                    int(t["component"]),
                    None if t.get("derivative") is None else int(t["derivative"]),
                )
                for t in data.get("terms", [])
            ],
            _sets_from_json(data.get("nonneg", [])),
            _sets_from_json(data.get("nonpos", [])),
            data.get("degree"),
        )


def residual_functional(
    field,
    side_info: SideInfo,
    domain: BasicSemialgebraicSet,
    resolution: int = 50,
    potential_degree: Optional[int] = None,
) -> ResidualReport:
    """
    Grid estimate of how far a concrete field is from satisfying side info.

    Args:
        field: PolyVec or any FieldHandle
        side_info: Item to measure
        domain: Domain Omega (supplies the sampling box)
        resolution: Points per axis
        potential_degree: Degree of the fitted potential for Grad/Ham

    Returns:
        ResidualReport with the value and the worst sample

    Raises:
        EmptyGridError: If a sampled region contains no grid point
    """
    return side_info.residual(field, domain, resolution, potential_degree)
