"""
CSV readers and writers for trajectories, datasets and field grids.

Floats are written with %.17g and parsed with pandas' round-trip parser, so
every file reads back to the exact values that were written. Metadata rides
in leading ``#`` comment lines.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import ConfigError
from .dataset import Dataset, Provenance
from .integrate import Trajectory

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
PROVENANCE_PREFIX = "# provenance: "
EXITED_PREFIX = "# exited_at: "

PathLike = Union[str, Path]


def _write(path: PathLike, frame: pd.DataFrame, comments: List[str]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        for line in comments:
            handle.write(line + "\n")
        frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def _read(path: PathLike) -> Tuple[pd.DataFrame, List[str]]:
    path = Path(path)
    with path.open() as handle:
        comments = [line.rstrip("\n") for line in handle if line.startswith("#")]
    frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    return frame, comments


def _columns(prefix: str, n: int) -> List[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def write_trajectory_csv(trajectory: Trajectory, path: PathLike) -> Path:
    """Columns t,x1..xn; a comment records the exit time when present."""
    frame = pd.DataFrame(trajectory.states, columns=_columns("x", trajectory.n))
    frame.insert(0, "t", trajectory.times)
    comments = []
    if trajectory.exited_at is not None:
        comments.append(f"{EXITED_PREFIX}{trajectory.exited_at!r}")
    return _write(path, frame, comments)


def read_trajectory_csv(path: PathLike) -> Trajectory:
    frame, comments = _read(path)
    if "t" not in frame.columns:
        raise ConfigError(f"{path} has no t column")
    exited = None
    for line in comments:
        if line.startswith(EXITED_PREFIX):
            exited = float(line[len(EXITED_PREFIX):])
    states = frame.drop(columns="t").to_numpy(dtype=float)
    return Trajectory(frame["t"].to_numpy(dtype=float), states, exited)


def write_dataset_csv(data: Dataset, path: PathLike) -> Path:
    """Columns x1..xn,y1..yn with the provenance as a JSON comment."""
    n = data.n
    frame = pd.DataFrame(
        np.hstack([data.xs, data.ys]), columns=_columns("x", n) + _columns("y", n)
    )
    comments = []
    if data.provenance is not None:
        comments.append(PROVENANCE_PREFIX + json.dumps(data.provenance.to_json(), sort_keys=True))
    return _write(path, frame, comments)


def read_dataset_csv(path: PathLike) -> Dataset:
    frame, comments = _read(path)
    width = frame.shape[1]
    if width % 2:
        raise ConfigError(f"{path} must have matching x and y columns")
    n = width // 2
    if list(frame.columns) != _columns("x", n) + _columns("y", n):
        raise ConfigError(f"{path} header must be x1..x{n},y1..y{n}")
    provenance: Optional[Provenance] = None
    for line in comments:
        if line.startswith(PROVENANCE_PREFIX):
            provenance = Provenance(**json.loads(line[len(PROVENANCE_PREFIX):]))
    values = frame.to_numpy(dtype=float).reshape(-1, width)
    return Dataset(values[:, :n], values[:, n:], provenance)


def write_grid_csv(points: np.ndarray, values: np.ndarray, path: PathLike, metadata: Optional[Dict[str, Any]] = None) -> Path:
    """Columns x1..xn,f1..fn in the given row order."""
    n = points.shape[1]
    frame = pd.DataFrame(np.hstack([points, values]), columns=_columns("x", n) + _columns("f", n))
    comments = [f"# {json.dumps(metadata, sort_keys=True)}"] if metadata else []
    return _write(path, frame, comments)


def read_grid_csv(path: PathLike) -> Tuple[np.ndarray, np.ndarray]:
    frame, _ = _read(path)
    n = frame.shape[1] // 2
    values = frame.to_numpy(dtype=float).reshape(-1, 2 * n)
    return values[:, :n], values[:, n:]
