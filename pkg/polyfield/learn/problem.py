"""
The constrained fitting problem: data, candidate degree, side information,
loss and domain.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..config import current_config
from ..dynamics import Dataset, FieldHandle, evaluate_batch
from ..errors import DegreeError, DimensionMismatchError, IndexOutOfRangeError, InvalidInputError
from ..poly import MultiPoly
from ..semialg import BasicSemialgebraicSet, membership_mask
from ..sideinfo import SideInfo
from ..types import LossKind, SideInfoTag

logger = logging.getLogger(__name__)


@dataclass
class LearningProblem:
    """
    Everything needed to assemble the fitting program.

    Attributes:
        data: Training pairs
        degree: Candidate degree d
        domain: Domain Omega on which side information is imposed
        side_infos: Side-information items; their ``degree`` overrides
            ``multiplier_degree``
        fixed: Components known exactly (0-based index to polynomial)
        loss: Data-fit loss
        l1_penalty: Weight of an optional l1 penalty on free coefficients
        multiplier_degree: Default Putinar multiplier degree; falls back to
            the configured value

    Examples:
        >>> from polyfield.semialg import box_set
        >>> problem = LearningProblem(Dataset.empty(2), 2, box_set([0, 0], [1, 1]))
        >>> problem.n
        2
    """

    data: Dataset
    degree: int
    domain: BasicSemialgebraicSet
    side_infos: List[SideInfo] = field(default_factory=list)
    fixed: Dict[int, MultiPoly] = field(default_factory=dict)
    loss: LossKind = LossKind.L2
    l1_penalty: float = 0.0
    multiplier_degree: Optional[int] = None

    def __post_init__(self):
        self.loss = LossKind(self.loss)

    @property
    def n(self) -> int:
        return self.data.n

    def default_multiplier_degree(self) -> int:
        if self.multiplier_degree is not None:
            return int(self.multiplier_degree)
        return current_config().multiplier_degree

    def side_info_names(self) -> List[str]:
        return [f"{item.tag.value}{k + 1}" for k, item in enumerate(self.side_infos)]

    def validate(self) -> None:
        """
        Check dimensions; warn about data points outside the domain.

        Raises:
            DimensionMismatchError: If data, domain or fixed components disagree
            DegreeError: If the degree is negative
            InvalidInputError: If more than one item introduces a potential
                (Grad and Ham each learn their own V or H)
        """
        if self.degree < 0:
            raise DegreeError(f"Candidate degree must be nonnegative, got {self.degree}")
        if self.domain.n != self.n:
            raise DimensionMismatchError(
                f"Data has dimension {self.n} but the domain has {self.domain.n}"
            )
        for i, poly in self.fixed.items():
            if not 0 <= i < self.n:
                raise IndexOutOfRangeError(f"Fixed component {i} out of range")
            if poly.n != self.n:
                raise DimensionMismatchError(f"Fixed component {i} is not over {self.n} variables")
        potentials = [
            name
            for name, item in zip(self.side_info_names(), self.side_infos)
            if item.tag in (SideInfoTag.GRAD, SideInfoTag.HAM)
        ]
        if len(potentials) > 1:
            raise InvalidInputError(
                f"At most one gradient or Hamiltonian item per problem, got {', '.join(potentials)}"
            )
        if len(self.data):
            outside = ~membership_mask(self.domain, self.data.xs, 1e-9)
            if np.any(outside):
                logger.warning(f"{int(outside.sum())} data points lie outside the domain")

    def to_json(self) -> Dict[str, Any]:
        """Canonical description used for the model fingerprint."""
        return {
            "n": self.n,
            "degree": self.degree,
            "loss": self.loss.value,
            "l1_penalty": self.l1_penalty,
            "multiplier_degree": self.default_multiplier_degree(),
            "domain": self.domain.to_json(),
            "fixed": {str(i): p.to_pairs() for i, p in sorted(self.fixed.items())},
            "side_infos": [item.to_json() for item in self.side_infos],
            "data": {"x": self.data.xs.tolist(), "y": self.data.ys.tolist()},
        }


def compute_loss(field: FieldHandle, data: Dataset, loss: LossKind = LossKind.L2) -> float:
    """
    Data-fit loss of a concrete field.

    l2 is the squared Euclidean norm of the stacked residual, l1 its sum of
    absolute values and linf its largest absolute entry.
    """
    if not len(data):
        return 0.0
    residual = (data.ys - evaluate_batch(field, data.xs)).ravel()
    loss = LossKind(loss)
    if loss == LossKind.L1:
        return float(np.sum(np.abs(residual)))
    if loss == LossKind.LINF:
        return float(np.max(np.abs(residual)))
    return float(residual @ residual)
