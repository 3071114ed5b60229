"""
Closed basic semialgebraic sets, box constructors and grid sampling.
"""

from .grid import GRID_TOL, Grid, axis_points, grid_sample, refinement_axis
from .sets import BasicSemialgebraicSet, box_set, halfspace, membership, membership_mask

__all__ = [
    "BasicSemialgebraicSet",
    "GRID_TOL",
    "Grid",
    "axis_points",
    "box_set",
    "grid_sample",
    "halfspace",
    "membership",
    "membership_mask",
    "refinement_axis",
]
