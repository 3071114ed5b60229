"""
Integration, dataset synthesis and field distances.
"""

from .csvio import (
    read_dataset_csv,
    read_grid_csv,
    read_trajectory_csv,
    write_dataset_csv,
    write_grid_csv,
    write_trajectory_csv,
)
from .dataset import (
    CENTRAL_DIFFERENCE,
    EXACT,
    Dataset,
    Provenance,
    ScheduleEntry,
    sample_dataset,
    uniform_schedule,
)
from .distances import (
    DistanceEnvelope,
    distance_envelope,
    gronwall_bound,
    hamiltonian_drift,
    lipschitz_estimate,
    sup_distance,
    trajectory_distance,
)
from .fields import ClosedFormField, ControlledField, FieldHandle, evaluate_batch, jacobian_batch
from .integrate import BatchResult, Trajectory, integrate, integrate_batch, step_schedule

__all__ = [
    "BatchResult",
    "CENTRAL_DIFFERENCE",
    "ClosedFormField",
    "ControlledField",
    "Dataset",
    "DistanceEnvelope",
    "EXACT",
    "FieldHandle",
    "Provenance",
    "ScheduleEntry",
    "Trajectory",
    "distance_envelope",
    "evaluate_batch",
    "gronwall_bound",
    "hamiltonian_drift",
    "integrate",
    "integrate_batch",
    "jacobian_batch",
    "lipschitz_estimate",
    "read_dataset_csv",
    "read_grid_csv",
    "read_trajectory_csv",
    "sample_dataset",
    "step_schedule",
    "sup_distance",
    "trajectory_distance",
    "uniform_schedule",
    "write_dataset_csv",
    "write_grid_csv",
    "write_trajectory_csv",
]
