"""
Solving an assembled problem and reading back a certified model.
"""

import logging
from typing import List, Optional

import numpy as np

from ..config import current_config
from ..conic import Solution, solve
from ..errors import (
    EmptyGridError,
    InfeasibleSideInfoError,
    InvalidInputError,
    SolverFailureError,
)
from ..semialg import BasicSemialgebraicSet
from ..sideinfo import ResidualReport
from ..sos import extract_certificate
from ..types import SolverOptions, SolveStatus
from ..utils.helpers import fingerprint
from .assemble import AssembledProblem, assemble
from .model import LearnedModel, ModelCertificate
from .problem import LearningProblem, compute_loss

logger = logging.getLogger(__name__)

OBJECTIVE_TOL = 1e-6


def _infeasible_blocks(assembled: AssembledProblem, solution: Solution) -> List[str]:
    if solution.infeasible_rows:
        return sorted({label.split(":", 1)[0] for label in solution.infeasible_rows})
    names = [c.name for c in assembled.compiled]
    return names or ["loss"]


def _certificates(assembled: AssembledProblem, x: np.ndarray, strict: bool) -> List[ModelCertificate]:
    n = assembled.problem.n
    out: List[ModelCertificate] = []
    for compiled in assembled.compiled:
        for blocks in compiled.sos:
            cert = ModelCertificate(
                blocks.name,
                extract_certificate(blocks, assembled.program, x),
                blocks.target.substitute(x),
                blocks.domain or BasicSemialgebraicSet.whole_space(n),
            )
            report = cert.verify()
            if not report.valid:
                message = (
                    f"Certificate {blocks.name} failed verification: residual "
                    f"{report.max_residual:.3e}, min eigenvalue {report.min_eigenvalue:.3e}"
                )
                if strict:
                    raise SolverFailureError(message)
                logger.warning(message)
            out.append(cert)
    return out


def _penalty_value(assembled: AssembledProblem, x: np.ndarray) -> float:
    problem, candidate = assembled.problem, assembled.candidate
    if problem.l1_penalty <= 0:
        return 0.0
    indices = [
        idx for i in candidate.free_components() for idx in assembled.registry.group(candidate.groups[i]).indices
    ]
    return problem.l1_penalty * float(np.sum(np.abs(x[indices])))


def _check_objective(expected: float, solver_objective: float, strict: bool) -> None:
    """The program objective must match the loss recomputed from the field."""
    if abs(expected - solver_objective) <= OBJECTIVE_TOL * max(1.0, abs(expected)):
        return
    message = f"Solver objective {solver_objective:.9g} differs from recomputed value {expected:.9g}"
    if strict:
        raise SolverFailureError(message)
    logger.warning(message)


def _residuals(
    problem: LearningProblem, field, resolution: int, delta: float, strict: bool
) -> List[ResidualReport]:
    reports: List[ResidualReport] = []
    for name, item in zip(problem.side_info_names(), problem.side_infos):
        try:
            report = item.residual(field, problem.domain, resolution)
        except (EmptyGridError, InvalidInputError) as error:
            message = f"Residual of {name} could not be evaluated: {error}"
            if strict:
                raise SolverFailureError(message) from error
            logger.warning(message)
            reports.append(ResidualReport.not_evaluated(item.tag, resolution, str(error)))
            continue
        reports.append(report)
        if not report.satisfied(delta):
            message = f"Side information {name} violated by {report.value:.3e} at {report.worst_point}"
            if strict:
                raise SolverFailureError(message)
            logger.warning(message)
    return reports


def fit(
    problem: LearningProblem,
    opts: Optional[SolverOptions] = None,
    check_residuals: bool = True,
) -> LearnedModel:
    """
    Assemble, solve, reconstruct and verify.

    Every SOS block's certificate is extracted and re-verified, and every
    imposed side-information residual is checked against the configured
    delta on the configured grid. The solver objective is compared with the
    loss recomputed from the field, and a residual that cannot be evaluated
    counts as a failed check. All of these raise for an optimal solve and
    only warn for a best iterate, where the unevaluated residual is kept as
    an unchecked report.

    Args:
        problem: Learning problem
        opts: Solver options; defaults come from the active configuration
        check_residuals: Run the residual check

    Returns:
        LearnedModel; ``status`` is not OPTIMAL when the iteration cap was hit

    Raises:
        InfeasibleSideInfoError: If the side information admits no field,
            naming the offending blocks
        SolverFailureError: On numerical failure, or when a certificate,
            residual or objective check fails for an optimal solve
        InvalidInputError: If two items both introduce a potential
    """
    config = current_config()
    assembled = assemble(problem)
    program = assembled.program
    solution = solve(program, opts)

    if solution.status == SolveStatus.PRIMAL_INFEASIBLE:
        blocks = _infeasible_blocks(assembled, solution)
        raise InfeasibleSideInfoError(
            f"Side information is infeasible; offending blocks: {', '.join(blocks)}", blocks
        )
    if solution.status == SolveStatus.DUAL_INFEASIBLE:
        raise SolverFailureError("Fitting program is unbounded")
    if not np.all(np.isfinite(solution.x)):
        raise SolverFailureError(f"Solver returned no usable iterate (status {solution.status.value})")

    optimal = solution.is_optimal
    if not optimal:
        logger.warning(
            f"Solver stopped with status {solution.status.value}; keeping the best iterate"
        )

    x = solution.x
    field = assembled.candidate.realize(program, x)
    certificates = _certificates(assembled, x, strict=optimal)
    potentials = [c.potential for c in assembled.compiled if c.potential is not None]
    potential = potentials[0].substitute(x) if potentials else None

    objective = compute_loss(field, problem.data, problem.loss)
    _check_objective(objective + _penalty_value(assembled, x), program.objective_value(x), strict=optimal)

    residuals: List[ResidualReport] = []
    if check_residuals:
        residuals = _residuals(
            problem, field, config.residual_resolution, config.residual_delta, strict=optimal
        )

    model = LearnedModel(
        field=field,
        degree=problem.degree,
        objective=objective,
        status=solution.status,
        gap=solution.gap,
        certificates=certificates,
        potential=potential,
        residuals=residuals,
        side_info=[item.tag for item in problem.side_infos],
        fingerprint=fingerprint(problem.to_json()),
        iterations=solution.iterations,
    )
    logger.info(
        f"Fitted degree-{problem.degree} model: objective={objective:.6g} "
        f"status={solution.status.value} certificates={len(certificates)}"
    )
    return model
