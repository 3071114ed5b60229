"""
Solving conic programs.

The reference backend hands the program to cvxopt's ``conelp``, a primal-dual
path-following method with Nesterov-Todd scaling, Mehrotra correction and a
homogeneous self-dual embedding for infeasibility detection. A presolve step
runs first: dependent equality rows are removed, inconsistent ones are
reported as primal infeasibility, and free directions that no equality and no
cone constrains are either pinned (objective-neutral) or reported as dual
infeasibility. The remaining free variables are then eliminated through an
orthonormal complement of their columns and recovered by a truncated
pseudo-inverse after the solve.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg

from ..config import current_config
from ..errors import InvalidInputError, SolverFailureError
from ..types import ConeKind, SolverOptions, SolveStatus
from .program import SQRT2, ConicProgram, VariableGroup

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
CONSISTENCY_TOL = 1e-9


@dataclass
class Solution:
    """Result of a conic solve."""

    x: np.ndarray
    y: np.ndarray
    status: SolveStatus
    gap: float = 0.0
    primal_residual: float = 0.0
    dual_residual: float = 0.0
    primal_objective: float = 0.0
    dual_objective: float = 0.0
    iterations: int = 0
    infeasible_rows: List[str] = field(default_factory=list)

    @property
    def is_optimal(self) -> bool:
        return self.status == SolveStatus.OPTIMAL


Backend = Callable[[ConicProgram, SolverOptions], Solution]

_BACKENDS: Dict[str, Backend] = {}


def register_backend(name: str, backend: Backend) -> None:
    """Make a solver available under ``name`` for ``solve``."""
    _BACKENDS[name] = backend


def available_backends() -> List[str]:
    return sorted(_BACKENDS)


def solve(program: ConicProgram, opts: Optional[SolverOptions] = None) -> Solution:
    """
    Solve a conic program.

    Args:
        program: Well-formed program
        opts: Tolerances, iteration cap and backend name; defaults come from
            the active configuration

    Returns:
        Solution; a non-optimal status is returned, never hidden

    Raises:
        InvalidInputError: If the backend is unknown
        SolverFailureError: If the backend hits a singular KKT system

    Examples:
        >>> from polyfield.conic import VariableRegistry, Fragment, build_program
        >>> registry = VariableRegistry()
        >>> _ = registry.declare("x", ConeKind.NONNEG, 1)
        >>> solve(build_program(registry, [], {0: 1.0})).primal_objective
        0.0
    """
    opts = opts or SolverOptions.from_config(current_config())
    if opts.backend not in _BACKENDS:
        raise InvalidInputError(
            f"Unknown solver backend {opts.backend}; available: {available_backends()}"
        )
    solution = _BACKENDS[opts.backend](program, opts)
    logger.info(
        f"Solved program ({program.summary()}): status={solution.status.value} "
        f"iterations={solution.iterations} gap={solution.gap:.3e}"
    )
    return solution


@dataclass
class Presolved:
    """Equality system after row reduction and free-direction pinning."""

    A: np.ndarray
    b: np.ndarray
    kept_rows: np.ndarray
    status: Optional[SolveStatus] = None
    infeasible_rows: List[str] = field(default_factory=list)


def _independent_rows(A: np.ndarray) -> np.ndarray:
    """Sorted indices of a maximal set of numerically independent rows."""
    if not A.shape[0] or not A.shape[1]:
        return np.zeros(0, dtype=int)
    _, R, piv = linalg.qr(A.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R)) if R.size else np.zeros(0)
    scale = diag[0] if diag.size and diag[0] > 0 else 1.0
    rank = int(np.sum(diag > RANK_TOL * max(scale, 1.0)))
    return np.sort(piv[:rank])


def _free_columns(program: ConicProgram) -> np.ndarray:
    cols = [list(g.indices) for g in program.groups if g.kind == ConeKind.FREE]
    return np.array(sorted(i for c in cols for i in c), dtype=int)


def presolve(program: ConicProgram) -> Presolved:
    """
    Reduce the equality system to full row rank and pin unconstrained free
    directions.
    """
    A = program.A.toarray()
    b = program.b.copy()
    m, n = A.shape
    kept = _independent_rows(A)

    if m and kept.size < m:
        x_ls, *_ = linalg.lstsq(A[kept], b[kept]) if kept.size else (np.zeros(n),)
        residual = np.abs(A @ x_ls - b)
        bad = np.nonzero(residual > CONSISTENCY_TOL * max(1.0, np.max(np.abs(b))))[0]
        if bad.size:
            labels = [program.row_labels[i] for i in bad]
            logger.warning(f"Inconsistent equality rows: {labels}")
            return Presolved(A, b, kept, SolveStatus.PRIMAL_INFEASIBLE, labels)
        logger.debug(f"Dropped {m - kept.size} dependent equality rows")

    A_red = A[kept] if m else np.zeros((0, n))
    b_red = b[kept] if m else np.zeros(0)

    free = _free_columns(program)
    if free.size:
        A_free = A_red[:, free]
        null = linalg.null_space(A_free, rcond=RANK_TOL) if A_free.shape[0] else np.eye(free.size)
        if null.shape[1]:
            if np.max(np.abs(program.c[free] @ null)) > RANK_TOL:
                return Presolved(A_red, b_red, kept, SolveStatus.DUAL_INFEASIBLE)
            pin = np.zeros((null.shape[1], n))
            pin[:, free] = null.T
            A_red = np.vstack([A_red, pin])
            b_red = np.concatenate([b_red, np.zeros(null.shape[1])])
            logger.debug(f"Pinned {null.shape[1]} unconstrained free directions")
    return Presolved(A_red, b_red, kept)


@dataclass
class Elimination:
    """
    Free variables written in terms of the cone variables.

    With the presolved rows split as A_F x_F + A_C x_C = b, the free part is
    x_F = pinv (b - A_C x_C) and the cone part must satisfy
    ``A x_C = b`` with ``A = basis^T A_C`` for an orthonormal basis of the
    complement of range(A_F). ``c`` and ``offset`` carry the objective over.
    """

    free: np.ndarray
    cone: np.ndarray
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    offset: float
    basis: np.ndarray
    pinv: np.ndarray
    dual_shift: np.ndarray

    def recover(self, pre: Presolved, x_cone: np.ndarray) -> np.ndarray:
        n = self.free.size + self.cone.size
        x = np.zeros(n)
        x[self.cone] = x_cone
        x[self.free] = self.pinv @ (pre.b - pre.A[:, self.cone] @ x_cone)
        return x

    def dual(self, y_reduced: np.ndarray) -> np.ndarray:
        return self.basis @ y_reduced + self.dual_shift


def eliminate_free(program: ConicProgram, pre: Presolved) -> Optional[Elimination]:
    """
    Remove the free variables from a presolved program.

    The interior-point method then only sees cone variables and equality
    rows with orthonormal structure, so a badly conditioned data design
    (nearly collinear monomials along a short trajectory) never enters its
    KKT systems. Returns None when there is nothing to eliminate.

    Raises:
        SolverFailureError: If the decomposition fails
    """
    free = _free_columns(program)
    if not free.size or not pre.A.shape[0]:
        return None
    n = program.num_variables
    cone = np.setdiff1d(np.arange(n), free)
    A_F = pre.A[:, free]
    A_C = pre.A[:, cone]
    try:
        U, s, Vt = linalg.svd(A_F, full_matrices=True)
    except (np.linalg.LinAlgError, ValueError) as error:
        raise SolverFailureError(f"Free-variable elimination failed: {error}") from error
    rank = int(np.sum(s > RANK_TOL * max(s[0] if s.size else 0.0, 1.0)))
    pinv = Vt[:rank].T @ (U[:, :rank].T / s[:rank, None])
    complement = U[:, rank:]

    A_red = complement.T @ A_C
    b_red = complement.T @ pre.b
    rows = _independent_rows(A_red)
    basis = complement[:, rows]
    dual_shift = pinv.T @ program.c[free]
    logger.debug(
        f"Eliminated {free.size} free variables; {rows.size} of {pre.A.shape[0]} equality rows remain"
    )
    return Elimination(
        free,
        cone,
        A_red[rows],
        b_red[rows],
        program.c[cone] - A_C.T @ dual_shift,
        float(dual_shift @ pre.b),
        basis,
        pinv,
        dual_shift,
    )


def _cone_rows(program: ConicProgram) -> Tuple[np.ndarray, Dict[str, object]]:
    """Build G (with h = 0) so that s = -G x lies in cvxopt's cone ordering."""
    n = program.num_variables
    blocks: List[np.ndarray] = []
    dims: Dict[str, object] = {"l": 0, "q": [], "s": []}

    nonneg = program.groups_of_kind(ConeKind.NONNEG)
    for g in nonneg:
        rows = np.zeros((g.dimension, n))
        rows[np.arange(g.dimension), list(g.indices)] = -1.0
        blocks.append(rows)
        dims["l"] += g.dimension

    for g in program.groups:
        if g.kind == ConeKind.SOC and g.dimension:
            rows = np.zeros((g.dimension, n))
            rows[np.arange(g.dimension), list(g.indices)] = -1.0
            blocks.append(rows)
            dims["q"].append(g.dimension)
        elif g.kind == ConeKind.RSOC:
            blocks.append(_rsoc_rows(g, n))
            dims["q"].append(g.dimension)

    for g in program.groups_of_kind(ConeKind.PSD):
        if g.size:
            blocks.append(_psd_rows(g, n))
            dims["s"].append(g.size)

    G = np.vstack(blocks) if blocks else np.zeros((0, n))
    return G, dims


def _rsoc_rows(group: VariableGroup, n: int) -> np.ndarray:
    # (u, v, w) with 2uv >= |w|^2 maps to ((u+v)/sqrt2, (u-v)/sqrt2, w) in SOC.
    rows = np.zeros((group.dimension, n))
    u, v = group.offset, group.offset + 1
    rows[0, u] = rows[0, v] = -1.0 / SQRT2
    rows[1, u] = -1.0 / SQRT2
    rows[1, v] = 1.0 / SQRT2
    for k in range(2, group.dimension):
        rows[k, group.offset + k] = -1.0
    return rows


def _psd_rows(group: VariableGroup, n: int) -> np.ndarray:
    side = group.size
    rows = np.zeros((side * side, n))
    r_idx, c_idx = np.triu_indices(side)
    for k, (i, j) in enumerate(zip(r_idx, c_idx)):
        col = group.offset + k
        if i == j:
            rows[i * side + i, col] = -1.0
        else:
            rows[j * side + i, col] = -1.0 / SQRT2
            rows[i * side + j, col] = -1.0 / SQRT2
    return rows


def _solve_without_cones(program: ConicProgram, pre: Presolved) -> Solution:
    n = program.num_variables
    if n == 0:
        return Solution(np.zeros(0), np.zeros(program.num_equalities), SolveStatus.OPTIMAL)
    x, *_ = linalg.lstsq(pre.A, pre.b)
    y_red, *_ = linalg.lstsq(pre.A.T, program.c)
    residual = float(np.linalg.norm(pre.A @ x - pre.b)) if pre.b.size else 0.0
    dual_res = float(np.linalg.norm(pre.A.T @ y_red - program.c))
    y = np.zeros(program.num_equalities)
    y[pre.kept_rows] = y_red[: pre.kept_rows.size]
    objective = program.objective_value(x)
    return Solution(
        x,
        y,
        SolveStatus.OPTIMAL,
        0.0,
        residual,
        dual_res,
        objective,
        objective,
        0,
    )


def _cvxopt_backend(program: ConicProgram, opts: SolverOptions) -> Solution:
    from cvxopt import matrix, solvers, sparse as cvx_sparse

    n = program.num_variables
    m = program.num_equalities
    pre = presolve(program)
    if pre.status is not None:
        return Solution(
            np.full(n, np.nan),
            np.full(m, np.nan),
            pre.status,
            float("inf"),
            float("inf"),
            float("inf"),
            infeasible_rows=pre.infeasible_rows,
        )
    if not program.has_cones():
        return _solve_without_cones(program, pre)

    G, dims = _cone_rows(program)
    reduced = eliminate_free(program, pre)
    if reduced is None:
        c, A, b, offset = program.c, pre.A, pre.b, 0.0
    else:
        G = G[:, reduced.cone]
        c, A, b, offset = reduced.c, reduced.A, reduced.b, reduced.offset
    options = {
        "show_progress": bool(opts.show_progress),
        "maxiters": int(opts.max_iters),
        "abstol": float(opts.gap_tol),
        "reltol": float(opts.gap_tol),
        "feastol": float(opts.feas_tol),
    }
    try:
        result = solvers.conelp(
            matrix(c.reshape(-1, 1)),
            cvx_sparse(matrix(G)),
            matrix(np.zeros((G.shape[0], 1))),
            dims,
            cvx_sparse(matrix(A)) if A.shape[0] else None,
            matrix(b.reshape(-1, 1)) if A.shape[0] else None,
            options=options,
        )
    except (ArithmeticError, ValueError) as error:
        raise SolverFailureError(f"Conic solver failed: {error}") from error

    status = {
        "optimal": SolveStatus.OPTIMAL,
        "primal infeasible": SolveStatus.PRIMAL_INFEASIBLE,
        "dual infeasible": SolveStatus.DUAL_INFEASIBLE,
    }.get(result["status"], SolveStatus.MAX_ITERATIONS)

    def _vector(key: str, size: int) -> np.ndarray:
        value = result.get(key)
        return np.full(size, np.nan) if value is None else np.array(value).ravel()

    def _number(key: str) -> float:
        value = result.get(key)
        return float("nan") if value is None else float(value)

    x = _vector("x", G.shape[1])
    y_red = -_vector("y", A.shape[0])
    if reduced is not None:
        x = reduced.recover(pre, x)
        y_red = reduced.dual(y_red)
    y = np.zeros(m)
    y[pre.kept_rows] = y_red[: pre.kept_rows.size]
    return Solution(
        x=x,
        y=y,
        status=status,
        gap=_number("gap"),
        primal_residual=_number("primal infeasibility"),
        dual_residual=_number("dual infeasibility"),
        primal_objective=_number("primal objective") + offset,
        dual_objective=_number("dual objective") + offset,
        iterations=int(result.get("iterations") or 0),
    )


register_backend("cvxopt", _cvxopt_backend)
