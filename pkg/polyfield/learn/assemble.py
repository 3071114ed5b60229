"""
Assembly of the fitting program: loss epigraph plus every compiled
side-information block, over one shared variable registry.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from ..conic import ConicProgram, Fragment, VariableRegistry, build_program, presolve
from ..errors import InfeasibleSideInfoError
from ..poly import CONSTANT
from ..sideinfo import CandidateParam, CompiledSideInfo
from ..types import ConeKind, LossKind, SolveStatus
from .problem import LearningProblem

logger = logging.getLogger(__name__)

LOSS = "loss"
PENALTY = "penalty"


@dataclass
class AssembledProblem:
    """Program plus the bookkeeping needed to read a solution back."""

    problem: LearningProblem
    program: ConicProgram
    registry: VariableRegistry
    candidate: CandidateParam
    compiled: List[CompiledSideInfo] = field(default_factory=list)
    loss_fragment: Fragment = None

    def name_table(self) -> List[Tuple[int, str]]:
        return self.registry.name_table()

    def sos_block_count(self) -> int:
        return sum(len(b.psd_blocks) for c in self.compiled for b in c.sos)


def _split(expr: Dict[int, float]) -> Tuple[Dict[int, float], float]:
    coeffs = {k: v for k, v in expr.items() if k != CONSTANT}
    return coeffs, expr.get(CONSTANT, 0.0)


def _loss_fragment(
    problem: LearningProblem,
    candidate: CandidateParam,
    registry: VariableRegistry,
) -> Tuple[Fragment, Dict[int, float]]:
    """Equalities and objective of the loss epigraph."""
    fragment = Fragment(LOSS)
    objective: Dict[int, float] = {}
    data = problem.data
    count = len(data) * problem.n
    if not count:
        return fragment, objective

    # residual rows r_ki = y_ki - p_i(x_k), in point-major order
    rows = []
    for k, (x, y) in enumerate(data.pairs):
        for i, expr in enumerate(candidate.evaluate_at(x)):
            coeffs, const = _split(expr)
            rows.append((f"pt{k}.f{i + 1}", coeffs, float(y[i]) - const))

    if problem.loss == LossKind.L2:
        cone = registry.declare(f"{LOSS}/cone", ConeKind.RSOC, 2 + count)
        t, s = cone.offset, cone.offset + 1
        fragment.add_equality({s: 1.0}, 0.5, "half")
        for j, (label, coeffs, rhs) in enumerate(rows):
            fragment.add_equality({**coeffs, cone.offset + 2 + j: 1.0}, rhs, label)
        objective[t] = 1.0
    elif problem.loss == LossKind.L1:
        pos = registry.declare(f"{LOSS}/pos", ConeKind.NONNEG, count)
        neg = registry.declare(f"{LOSS}/neg", ConeKind.NONNEG, count)
        for j, (label, coeffs, rhs) in enumerate(rows):
            fragment.add_equality(
                {**coeffs, pos.offset + j: 1.0, neg.offset + j: -1.0}, rhs, label
            )
            objective[pos.offset + j] = 1.0
            objective[neg.offset + j] = 1.0
    else:
        bound = registry.declare(f"{LOSS}/bound", ConeKind.NONNEG, 1)
        upper = registry.declare(f"{LOSS}/upper", ConeKind.NONNEG, count)
        lower = registry.declare(f"{LOSS}/lower", ConeKind.NONNEG, count)
        t = bound.offset
        for j, (label, coeffs, rhs) in enumerate(rows):
            # t - r = u and t + r = v with u, v >= 0
            fragment.add_equality({**coeffs, t: 1.0, upper.offset + j: -1.0}, rhs, f"{label}.up")
            negated = {k: -v for k, v in coeffs.items()}
            fragment.add_equality({**negated, t: 1.0, lower.offset + j: -1.0}, -rhs, f"{label}.lo")
        objective[t] = 1.0
    return fragment, objective


def _penalty_fragment(
    problem: LearningProblem, candidate: CandidateParam, registry: VariableRegistry
) -> Tuple[Fragment, Dict[int, float]]:
    fragment = Fragment(PENALTY)
    objective: Dict[int, float] = {}
    if problem.l1_penalty <= 0:
        return fragment, objective
    coefficients = [
        idx for i in candidate.free_components() for idx in registry.group(candidate.groups[i]).indices
    ]
    pos = registry.declare(f"{PENALTY}/pos", ConeKind.NONNEG, len(coefficients))
    neg = registry.declare(f"{PENALTY}/neg", ConeKind.NONNEG, len(coefficients))
    for j, idx in enumerate(coefficients):
        fragment.add_equality({idx: 1.0, pos.offset + j: -1.0, neg.offset + j: 1.0}, 0.0, f"c{j}")
        objective[pos.offset + j] = problem.l1_penalty
        objective[neg.offset + j] = problem.l1_penalty
    return fragment, objective


def _check_affine(registry: VariableRegistry, compiled: List[CompiledSideInfo]) -> None:
    fragments = [c.affine for c in compiled if c.affine.equalities]
    if not fragments:
        return
    pre = presolve(build_program(registry, fragments))
    if pre.status == SolveStatus.PRIMAL_INFEASIBLE:
        blocks = sorted({label.split(":", 1)[0] for label in pre.infeasible_rows})
        raise InfeasibleSideInfoError(
            f"Affine side information is contradictory: {', '.join(blocks)}", blocks
        )


def assemble(problem: LearningProblem) -> AssembledProblem:
    """
    Build the conic program for a learning problem.

    The l2 loss is one rotated second-order cone (t, 1/2, r) over the
    stacked residual r = y - p(x), so minimizing t minimizes ||r||^2; l1 and
    linf use nonnegative epigraph slacks. With no data the objective is zero
    and the program is a pure feasibility problem.

    Args:
        problem: Learning problem

    Returns:
        AssembledProblem carrying the program and its registry

    Raises:
        InfeasibleSideInfoError: If the affine side information is inconsistent
        DimensionMismatchError: If data, domain or fixed components disagree

    Examples:
        >>> from polyfield.dynamics import Dataset
        >>> from polyfield.semialg import box_set
        >>> data = Dataset([[0.1, 0.2], [0.3, 0.4]], [[1.0, 0.0], [0.0, 1.0]])
        >>> assembled = assemble(LearningProblem(data, 1, box_set([0, 0], [1, 1])))
        >>> [g.dimension for g in assembled.program.groups_of_kind(ConeKind.RSOC)]
        [6]
    """
    problem.validate()
    registry = VariableRegistry()
    candidate = CandidateParam.declare(registry, problem.n, problem.degree, problem.fixed)
    default_degree = problem.default_multiplier_degree()

    compiled: List[CompiledSideInfo] = []
    for name, item in zip(problem.side_info_names(), problem.side_infos):
        compiled.append(item.compile(candidate, registry, problem.domain, name, default_degree))
        logger.debug(f"Compiled side information {name}")
    _check_affine(registry, compiled)

    loss_fragment, objective = _loss_fragment(problem, candidate, registry)
    penalty_fragment, penalty = _penalty_fragment(problem, candidate, registry)
    objective.update(penalty)

    fragments: List[Fragment] = [loss_fragment, penalty_fragment]
    for c in compiled:
        fragments.extend(c.fragments)
    program = build_program(registry, fragments, objective)
    logger.info(
        f"Assembled degree-{problem.degree} problem with {len(problem.data)} points and "
        f"{len(compiled)} side-information items: {program.summary()}"
    )
    return AssembledProblem(problem, program, registry, candidate, compiled, loss_fragment)
