"""
Field grids for external plotting.
"""

import logging
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..dynamics import FieldHandle, evaluate_batch, read_grid_csv, write_grid_csv
from ..errors import InvalidInputError
from ..semialg import BasicSemialgebraicSet, grid_sample

logger = logging.getLogger(__name__)


def export_field_grid(
    f: FieldHandle,
    domain: BasicSemialgebraicSet,
    resolution: int,
    destination: Union[str, Path],
) -> Path:
    """
    Write rows x1..xn,f1..fn over the domain grid in row-major order.

    Raises:
        InvalidInputError: If resolution < 2
    """
    if resolution < 2:
        raise InvalidInputError(f"Grid resolution must be at least 2, got {resolution}")
    points = grid_sample(domain, resolution=resolution).points
    with np.errstate(invalid="ignore", divide="ignore"):
        values = evaluate_batch(f, points)
    return write_grid_csv(points, values, destination, {"resolution": resolution})


def read_field_grid(path: Union[str, Path]) -> Tuple[np.ndarray, np.ndarray]:
    """Points and field values of an exported grid."""
    return read_grid_csv(path)
