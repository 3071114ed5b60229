"""
Uniform grids filtered by set membership.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import DimensionMismatchError, EmptyGridError, InvalidInputError
from .sets import BasicSemialgebraicSet, membership_mask

logger = logging.getLogger(__name__)

GRID_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Grid:
    """Admissible grid points of a set, in row-major ('ij') order."""

    points: np.ndarray
    resolution: int

    def __len__(self) -> int:
        return self.points.shape[0]

    def __iter__(self):
        return iter(self.points)


def axis_points(lo: float, hi: float, resolution: int) -> np.ndarray:
    """Evenly spaced axis samples; a degenerate axis collapses to one value."""
    return np.unique(np.linspace(lo, hi, resolution))



def refinement_axis(lo: float, hi: float, resolution: int) -> np.ndarray:
    """
    Union of the evenly spaced axes at resolution, ceil(resolution / 2), ...
    down to 2. The axis at 2k contains the axis at k, so a maximum taken over
    it can only grow when the resolution doubles.

    Examples:
        >>> refinement_axis(0.0, 1.0, 4).tolist()
        [0.0, 0.3333333333333333, 0.6666666666666666, 1.0]
        >>> len(refinement_axis(0.0, 1.0, 6))
        7
    """
    levels = [resolution]
    while levels[-1] > 2:
        levels.append(max(2, -(-levels[-1] // 2)))
    return np.unique(np.concatenate([np.linspace(lo, hi, r) for r in levels]))


def grid_sample(
    S: BasicSemialgebraicSet,
    lo: Optional[Sequence[float]] = None,
    hi: Optional[Sequence[float]] = None,
    resolution: int = 50,
    nested: bool = False,
) -> Grid:
    """
    Sample a uniform grid over the box [lo, hi] and keep the members of S.

    Args:
        S: Set to sample
        lo: Lower corner of the bounding box; defaults to ``S.bounds``
        hi: Upper corner of the bounding box; defaults to ``S.bounds``
        resolution: Points per axis (at least 2)
        nested: Sample the refinement axes instead of plain ones

    Returns:
        Grid of admissible points

    Raises:
        InvalidInputError: If resolution < 2 or no bounding box is available
        EmptyGridError: If no grid point lies in S

    Examples:
        >>> from polyfield.semialg import box_set
        >>> len(grid_sample(box_set([0, 0], [1, 1]), resolution=2))
        4
    """
    if resolution < 2:
        raise InvalidInputError(f"Grid resolution must be at least 2, got {resolution}")
    if lo is None or hi is None:
        if S.bounds is None:
            raise InvalidInputError("No bounding box given and the set carries none")
        lo = S.bounds[0] if lo is None else lo
        hi = S.bounds[1] if hi is None else hi
    lo_arr = np.asarray(lo, dtype=float)
    hi_arr = np.asarray(hi, dtype=float)
    if lo_arr.shape != (S.n,) or hi_arr.shape != (S.n,):
        raise DimensionMismatchError(f"Bounding box must have {S.n} coordinates")
    if np.any(lo_arr > hi_arr):
        raise InvalidInputError("Bounding box needs lo <= hi")

    make_axis = refinement_axis if nested else axis_points
    axes = [make_axis(a, b, resolution) for a, b in zip(lo_arr, hi_arr)]
    mesh = np.meshgrid(*axes, indexing="ij")
    candidates = np.stack([m.ravel() for m in mesh], axis=1)
    points = candidates[membership_mask(S, candidates, GRID_TOL)]
    if points.shape[0] == 0:
        raise EmptyGridError(
            f"No grid point of resolution {resolution} lies in the set"
        )
    logger.debug(f"Grid sample kept {points.shape[0]} of {candidates.shape[0]} points")
    return Grid(points, resolution)
