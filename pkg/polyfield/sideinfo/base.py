"""
Base class and registry for side-information items.

Every item knows how to compile itself into affine equalities and SOS blocks
on a CandidateParam, how to measure the residual of a concrete field, and how
to round-trip through JSON.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, ClassVar, Dict, List, Optional, Type

import numpy as np

from ..conic import Fragment, VariableRegistry
from ..errors import ConfigError, InfeasibleSideInfoError
from ..poly import CONSTANT, AffinePoly
from ..semialg import BasicSemialgebraicSet
from ..sos import ConstraintBlocks, monomial_label
from ..types import SideInfoTag
from .candidate import CandidateParam

logger = logging.getLogger(__name__)

AFFINE_TOL = 1e-10


@dataclass
class CompiledSideInfo:
    """Everything one side-information item adds to the learning program."""

    name: str
    tag: SideInfoTag
    affine: Fragment
    sos: List[ConstraintBlocks] = field(default_factory=list)
    potential: Optional[AffinePoly] = None

    @property
    def fragments(self) -> List[Fragment]:
        return [self.affine, *self.sos]


@dataclass
class ResidualReport:
    """
    Grid estimate of a side-information residual functional.

    A report whose residual could not be evaluated carries the reason in
    ``unchecked`` and a NaN value; it never counts as satisfied.
    """

    tag: SideInfoTag
    value: float
    resolution: int
    worst_point: Optional[List[float]] = None
    unchecked: Optional[str] = None

    @classmethod
    def not_evaluated(cls, tag: SideInfoTag, resolution: int, reason: str) -> "ResidualReport":
        return cls(tag, float("nan"), resolution, None, reason)

    @property
    def checked(self) -> bool:
        return self.unchecked is None

    def satisfied(self, delta: float) -> bool:
        return self.checked and self.value <= delta

    def to_json(self) -> Dict[str, Any]:
        data = {
            "tag": self.tag.value,
            "value": self.value if self.checked else None,
            "resolution": self.resolution,
            "worst_point": self.worst_point,
        }
        if not self.checked:
            data["unchecked"] = self.unchecked
        return data

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "ResidualReport":
        value = data.get("value")
        return cls(
            SideInfoTag(data["tag"]),
            float("nan") if value is None else float(value),
            int(data["resolution"]),
            data.get("worst_point"),
            data.get("unchecked"),
        )


def emit_identity(fragment: Fragment, poly: AffinePoly, prefix: str = "") -> int:
    """
    Add the equalities poly == 0, one per monomial.

    Rows without decision variables are dropped when their constant vanishes
    and reported as contradictory otherwise.

    Returns:
        Number of equalities added
    """
    added = 0
    for mono, expr in poly.terms.items():
        const = expr.get(CONSTANT, 0.0)
        coeffs = {k: v for k, v in expr.items() if k != CONSTANT}
        if not coeffs:
            if abs(const) > AFFINE_TOL:
                raise InfeasibleSideInfoError(
                    f"Side information {fragment.name} forces {const:g} = 0 at {mono}",
                    [fragment.name],
                )
            continue
        fragment.add_equality(coeffs, -const, f"{prefix}{monomial_label(mono)}")
        added += 1
    return added


class SideInfo(ABC):
    """
    Abstract side-information item.

    Subclasses register themselves by tag, which drives ``from_json``.
    ``degree`` (when present) overrides the default Putinar multiplier degree.
    """

    tag: ClassVar[SideInfoTag]
    _registry: ClassVar[Dict[SideInfoTag, Type["SideInfo"]]] = {}

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        tag = cls.__dict__.get("tag")
        if tag is not None:
            SideInfo._registry[tag] = cls

    def multiplier_degree(self, default: int) -> int:
        degree = getattr(self, "degree", None)
        return default if degree is None else int(degree)

    @abstractmethod
    def compile(
        self,
        candidate: CandidateParam,
        registry: VariableRegistry,
        domain: BasicSemialgebraicSet,
        name: str,
        default_degree: int = 2,
    ) -> CompiledSideInfo:
        """Compile onto the candidate's coefficient variables."""

    @abstractmethod
    def residual(
        self,
        field,
        domain: BasicSemialgebraicSet,
        resolution: int = 50,
        potential_degree: Optional[int] = None,
    ) -> ResidualReport:
        """Residual functional of a concrete field over the domain."""

    @abstractmethod
    def to_json(self) -> Dict[str, Any]:
        """JSON-compatible description including the tag."""

    @classmethod
    def from_json(cls, data: Dict[str, Any], n: int) -> "SideInfo":
        """Decode any registered side-information item."""
        try:
            tag = SideInfoTag(data["tag"])
        except (KeyError, ValueError) as error:
            raise ConfigError(f"Unknown side-information entry {data!r}") from error
        subclass = SideInfo._registry.get(tag)
        if subclass is None:
            raise ConfigError(f"No decoder registered for side information {tag.value}")
        try:
            return subclass._decode(data, n)
        except (KeyError, TypeError, ValueError) as error:
            raise ConfigError(f"Malformed {tag.value} side information: {error}") from error

    @classmethod
    def _decode(cls, data: Dict[str, Any], n: int) -> "SideInfo":
        raise NotImplementedError

    def __str__(self) -> str:
        return self.tag.value


def worst(values: np.ndarray, points: np.ndarray):
    """Largest finite value and its point; (0.0, None) when nothing is finite."""
    values = np.asarray(values, dtype=float)
    finite = np.isfinite(values)
    if not np.any(finite):
        return 0.0, None
    if not np.all(finite):
        logger.warning(f"Ignoring {int(np.sum(~finite))} non-finite residual samples")
    masked = np.where(finite, values, -np.inf)
    k = int(np.argmax(masked))
    return float(masked[k]), [float(v) for v in points[k]]
