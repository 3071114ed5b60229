"""
Conic program data model.

Decision variables live in named, cone-tagged groups declared on a
VariableRegistry. The flat variable vector concatenates the groups in
declaration order; a PSD group of side s occupies s(s+1)/2 slots holding the
row-major upper triangle with off-diagonal entries scaled by sqrt(2), which
makes the flattening an isometry.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from ..errors import ProgramError
from ..types import ConeKind

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)

LinearExpr = Dict[int, float]


def svec_dimension(side: int) -> int:
    return side * (side + 1) // 2


def svec_position(side: int, i: int, j: int) -> int:
    """Offset of entry (i, j), i <= j, inside a row-major upper triangle."""
    if i > j:
        i, j = j, i
    if not 0 <= i <= j < side:
        raise ProgramError(f"Entry ({i}, {j}) outside a {side}x{side} block")
    return i * side - i * (i - 1) // 2 + (j - i)


def svec(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    side = matrix.shape[0]
    rows, cols = np.triu_indices(side)
    scale = np.where(rows == cols, 1.0, SQRT2)
    return matrix[rows, cols] * scale


def smat(vector: Sequence[float], side: int) -> np.ndarray:
    vector = np.asarray(vector, dtype=float)
    rows, cols = np.triu_indices(side)
    scale = np.where(rows == cols, 1.0, 1.0 / SQRT2)
    out = np.zeros((side, side))
    out[rows, cols] = vector * scale
    out[cols, rows] = vector * scale
    return out


@dataclass(frozen=True)
class VariableGroup:
    """A contiguous block of the flat variable vector with one cone tag."""

    name: str
    kind: ConeKind
    size: int
    offset: int

    @property
    def dimension(self) -> int:
        """Number of flat slots; ``size`` is the side length for PSD groups."""
        return svec_dimension(self.size) if self.kind == ConeKind.PSD else self.size

    @property
    def indices(self) -> range:
        return range(self.offset, self.offset + self.dimension)


class VariableRegistry:
    """
    Shared table of decision-variable groups.

    Examples:
        >>> registry = VariableRegistry()
        >>> X = registry.declare("X", ConeKind.PSD, 2)
        >>> X.dimension
        3
        >>> registry.psd_entry("X", 0, 1)
        (1, 0.7071067811865475)
    """

    def __init__(self):
        self._groups: Dict[str, VariableGroup] = {}
        self._order: List[str] = []
        self._dimension = 0

    def declare(self, name: str, kind: ConeKind, size: int) -> VariableGroup:
        """
        Declare a group, or return it if declared identically before.

        Raises:
            ProgramError: On an invalid name or size, or a conflicting redeclaration
        """
        kind = ConeKind(kind)
        if not name or any(ch.isspace() for ch in name):
            raise ProgramError(f"Variable group name {name!r} must be non-empty without spaces")
        if size < 0 or (kind == ConeKind.RSOC and size < 2):
            raise ProgramError(f"Invalid size {size} for {kind.value} group {name}")
        if name in self._groups:
            existing = self._groups[name]
            if existing.kind != kind or existing.size != size:
                raise ProgramError(
                    f"Group {name} already declared as {existing.kind.value}({existing.size})"
                )
            return existing
        group = VariableGroup(name, kind, size, self._dimension)
        self._groups[name] = group
        self._order.append(name)
        self._dimension += group.dimension
        return group

    def fresh_name(self, stem: str) -> str:
        """Unused group name derived from ``stem``."""
        if stem not in self._groups:
            return stem
        k = 1
        while f"{stem}#{k}" in self._groups:
            k += 1
        return f"{stem}#{k}"

    def group(self, name: str) -> VariableGroup:
        if name not in self._groups:
            raise ProgramError(f"Undeclared variable group {name}")
        return self._groups[name]

    def __contains__(self, name: str) -> bool:
        return name in self._groups

    @property
    def groups(self) -> List[VariableGroup]:
        return [self._groups[n] for n in self._order]

    @property
    def dimension(self) -> int:
        return self._dimension

    def index(self, name: str, k: int = 0) -> int:
        group = self.group(name)
        if not 0 <= k < group.dimension:
            raise ProgramError(f"Slot {k} outside group {name} of dimension {group.dimension}")
        return group.offset + k

    def psd_entry(self, name: str, i: int, j: int) -> Tuple[int, float]:
        """Flat index and factor such that X[i, j] = factor * x[index]."""
        group = self.group(name)
        if group.kind != ConeKind.PSD:
            raise ProgramError(f"Group {name} is not a PSD block")
        pos = svec_position(group.size, i, j)
        return group.offset + pos, (1.0 if i == j else 1.0 / SQRT2)

    def name_table(self) -> List[Tuple[int, str]]:
        """Human-readable label for every flat slot."""
        table = []
        for group in self.groups:
            if group.kind == ConeKind.PSD:
                rows, cols = np.triu_indices(group.size)
                for k, (i, j) in enumerate(zip(rows, cols)):
                    table.append((group.offset + k, f"{group.name}[{i},{j}]"))
            else:
                for k in range(group.dimension):
                    table.append((group.offset + k, f"{group.name}[{k}]"))
        return table


@dataclass
class LinearEquality:
    """sum_k coeffs[k] * x[k] == rhs."""

    coeffs: LinearExpr
    rhs: float
    label: str = ""


@dataclass
class Fragment:
    """
    A named batch of linear equalities over registry variables.

    Loss epigraphs and SOS constraint blocks are fragments; cone membership
    is carried by the registry declarations they reference.
    """

    name: str
    equalities: List[LinearEquality] = field(default_factory=list)

    def add_equality(self, coeffs: Mapping[int, float], rhs: float, label: str = "") -> None:
        self.equalities.append(LinearEquality(dict(coeffs), float(rhs), label))


@dataclass(frozen=True, eq=False)
class ConicProgram:
    """
    minimize c^T x subject to A x = b and x in the product of group cones.
    """

    groups: Tuple[VariableGroup, ...]
    A: sparse.csr_matrix
    b: np.ndarray
    c: np.ndarray
    row_labels: Tuple[str, ...]

    @property
    def num_variables(self) -> int:
        return int(self.c.shape[0])

    @property
    def num_equalities(self) -> int:
        return int(self.b.shape[0])

    def groups_of_kind(self, kind: ConeKind) -> List[VariableGroup]:
        return [g for g in self.groups if g.kind == kind]

    @property
    def psd_block_count(self) -> int:
        return len(self.groups_of_kind(ConeKind.PSD))

    def has_cones(self) -> bool:
        return any(g.kind != ConeKind.FREE and g.dimension for g in self.groups)

    def group(self, name: str) -> VariableGroup:
        for g in self.groups:
            if g.name == name:
                return g
        raise ProgramError(f"Undeclared variable group {name}")

    def values(self, x: np.ndarray, name: str) -> np.ndarray:
        g = self.group(name)
        return np.asarray(x[g.offset : g.offset + g.dimension], dtype=float)

    def psd_matrix(self, x: np.ndarray, name: str) -> np.ndarray:
        g = self.group(name)
        if g.kind != ConeKind.PSD:
            raise ProgramError(f"Group {name} is not a PSD block")
        return smat(self.values(x, name), g.size)

    def objective_value(self, x: np.ndarray) -> float:
        return float(self.c @ x) if self.num_variables else 0.0

    def structurally_equal(self, other: "ConicProgram") -> bool:
        """Exact equality of groups, labels, sparsity pattern and values."""
        if not isinstance(other, ConicProgram):
            return False
        if self.groups != other.groups or self.row_labels != other.row_labels:
            return False
        if self.A.shape != other.A.shape:
            return False
        a, o = self.A.tocsr(), other.A.tocsr()
        a.sort_indices()
        o.sort_indices()
        return (
            np.array_equal(a.indptr, o.indptr)
            and np.array_equal(a.indices, o.indices)
            and np.array_equal(a.data, o.data)
            and np.array_equal(self.b, other.b)
            and np.array_equal(self.c, other.c)
        )

    def __eq__(self, other) -> bool:
        return self.structurally_equal(other)

    __hash__ = None

    def summary(self) -> str:
        counts = {kind.value: len(self.groups_of_kind(kind)) for kind in ConeKind}
        return (
            f"{self.num_variables} variables, {self.num_equalities} equalities, "
            + ", ".join(f"{v} {k}" for k, v in counts.items() if v)
        )


def _matrix_from_triplets(rows, cols, vals, shape) -> sparse.csr_matrix:
    matrix = sparse.coo_matrix(
        (np.asarray(vals, dtype=float), (np.asarray(rows, dtype=int), np.asarray(cols, dtype=int))),
        shape=shape,
    ).tocsr()
    matrix.sum_duplicates()
    matrix.eliminate_zeros()
    matrix.sort_indices()
    return matrix


def build_program(
    registry: VariableRegistry,
    fragments: Iterable[Fragment] = (),
    objective: Optional[Mapping[int, float]] = None,
) -> ConicProgram:
    """
    Assemble fragments into a single ConicProgram.

    Args:
        registry: Registry every fragment refers to
        fragments: Equality batches (SOS blocks, loss epigraphs, affine side info)
        objective: Linear cost as ``{flat index: weight}``

    Returns:
        The assembled program; rows are labelled ``fragment:label``

    Raises:
        ProgramError: If an entry references an undeclared slot

    Examples:
        >>> registry = VariableRegistry()
        >>> _ = registry.declare("Q", ConeKind.PSD, 1)
        >>> frag = Fragment("unit")
        >>> frag.add_equality({0: 1.0}, 1.0, "Q11")
        >>> build_program(registry, [frag]).num_equalities
        1
    """
    dim = registry.dimension
    rows: List[int] = []
    cols: List[int] = []
    vals: List[float] = []
    rhs: List[float] = []
    labels: List[str] = []

    for fragment in fragments:
        for k, eq in enumerate(fragment.equalities):
            r = len(rhs)
            for j, v in eq.coeffs.items():
                if not 0 <= j < dim:
                    raise ProgramError(
                        f"Fragment {fragment.name} references undeclared slot {j}"
                    )
                rows.append(r)
                cols.append(j)
                vals.append(v)
            rhs.append(eq.rhs)
            label = f"{fragment.name}:{eq.label or k}"
            if any(ch.isspace() for ch in label):
                raise ProgramError(f"Row label {label!r} contains whitespace")
            labels.append(label)

    c = np.zeros(dim)
    for j, v in (objective or {}).items():
        if not 0 <= j < dim:
            raise ProgramError(f"Objective references undeclared slot {j}")
        c[j] += v

    program = ConicProgram(
        tuple(registry.groups),
        _matrix_from_triplets(rows, cols, vals, (len(rhs), dim)),
        np.asarray(rhs, dtype=float),
        c,
        tuple(labels),
    )
    logger.debug(f"Built conic program: {program.summary()}")
    return program
