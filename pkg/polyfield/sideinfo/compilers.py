"""
Compilers from side information to constraints on the candidate's
coefficient variables.

Interpolation, symmetry and gradient/Hamiltonian structure become affine
equalities; sign, monotonicity, invariance and composite constraints become
Putinar blocks.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..conic import Fragment, VariableRegistry
from ..errors import (
    DimensionMismatchError,
    InfeasibleSideInfoError,
    InvalidInputError,
)
from ..poly import AffinePoly, MultiPoly, monomial_basis
from ..semialg import BasicSemialgebraicSet, membership
from ..sos import ConstraintBlocks, putinar_blocks
from ..types import ConeKind
from .base import AFFINE_TOL, emit_identity
from .candidate import CandidateParam

logger = logging.getLogger(__name__)

POINT_TOL = 1e-9


@dataclass
class SignRegion:
    """Component ``component`` is >= 0 on each ``nonneg`` set, <= 0 on each ``nonpos`` set."""

    component: int
    nonneg: List[BasicSemialgebraicSet] = field(default_factory=list)
    nonpos: List[BasicSemialgebraicSet] = field(default_factory=list)


@dataclass
class MonotoneRegion:
    """Sign of the partial derivative of ``component`` along ``variable``."""

    component: int
    variable: int
    nonneg: List[BasicSemialgebraicSet] = field(default_factory=list)
    nonpos: List[BasicSemialgebraicSet] = field(default_factory=list)


@dataclass
class CompositeTerm:
    """multiplier(x) * p_component, or its partial along ``derivative``."""

    multiplier: MultiPoly
    component: int
    derivative: Optional[int] = None


@dataclass
class Face:
    """
    Boundary piece {h = 0} of an invariant set intersected with the domain.

    When h is affine, one coordinate is eliminated through x = M y + b and
    ``set`` lives in the substituted coordinates.
    """

    boundary: MultiPoly
    region: BasicSemialgebraicSet
    set: BasicSemialgebraicSet
    substitution: Optional[Tuple[np.ndarray, np.ndarray]] = None
    eliminated: Optional[int] = None
    include_sigma0: bool = True


def _dedupe(polys: Sequence[MultiPoly]) -> List[MultiPoly]:
    out: List[MultiPoly] = []
    for p in polys:
        if p not in out:
            out.append(p)
    return out


def boundary_faces(
    B: BasicSemialgebraicSet, domain: BasicSemialgebraicSet
) -> List[Face]:
    """
    One face per defining inequality of B, restricted to B intersected with
    the domain. Faces that turn out empty are skipped with a warning.
    """
    region = B.intersect(domain)
    faces: List[Face] = []
    for h in B.inequalities:
        if h.degree() == 0:
            continue
        others = [g for g in region.inequalities if g != h]
        if h.degree() == 1:
            face = _affine_face(h, region, others)
        else:
            face_set = BasicSemialgebraicSet(
                region.n,
                others,
                list(region.equalities) + [h],
                region.archimedean_radius,
                region.bounds,
            )
            face = Face(h, region, face_set)
        if face is None:
            logger.warning(f"Boundary face {h} = 0 does not meet the domain; skipped")
            continue
        faces.append(face)
    return faces


def _affine_face(
    h: MultiPoly, region: BasicSemialgebraicSet, others: List[MultiPoly]
) -> Optional[Face]:
    n = h.n
    a = np.array([h.coefficient(tuple(int(i == j) for i in range(n))) for j in range(n)])
    a0 = h.coefficient((0,) * n)
    k = int(np.argmax(np.abs(a)))
    M = np.eye(n)
    M[k, :] = -a / a[k]
    M[k, k] = 0.0
    b = np.zeros(n)
    b[k] = -a0 / a[k]

    def reduce(polys: Sequence[MultiPoly], equality: bool) -> Optional[List[MultiPoly]]:
        kept = []
        for g in polys:
            g_sub = g.compose_affine(M, b)
            if g_sub.degree() == 0:
                value = g_sub.coefficient((0,) * n)
                if (equality and abs(value) > AFFINE_TOL) or (not equality and value < -AFFINE_TOL):
                    return None
                continue
            kept.append(g_sub)
        return _dedupe(kept)

    inequalities = reduce(others, False)
    equalities = reduce(region.equalities, True)
    if inequalities is None or equalities is None:
        return None

    bounds = None
    if region.bounds is not None:
        lo, hi = list(region.bounds[0]), list(region.bounds[1])
        lo[k] = hi[k] = 0.0
        bounds = (tuple(lo), tuple(hi))

    face_set = BasicSemialgebraicSet(n, inequalities, equalities, None, bounds)
    if face_set.is_polytope():
        return Face(h, region, face_set, (M, b), k, include_sigma0=False)
    if face_set.is_whole_space():
        return Face(h, region, face_set, (M, b), k, include_sigma0=True)
    ball = region.ball_polynomial()
    if ball is not None:
        inequalities = _dedupe(inequalities + [ball.compose_affine(M, b)])
    face_set = BasicSemialgebraicSet(n, inequalities, equalities, None, bounds)
    return Face(h, region, face_set, (M, b), k, include_sigma0=True)


def compile_interp(
    candidate: CandidateParam,
    points: Sequence[Tuple[Sequence[float], Sequence[float]]],
    domain: Optional[BasicSemialgebraicSet] = None,
    name: str = "interp",
) -> Fragment:
    """
    Equalities p(x_i) = y_i on the free components.

    Raises:
        InvalidInputError: If a point lies outside the domain
        InfeasibleSideInfoError: On a repeated x_i with conflicting y_i, or a
            fixed component that misses its target value

    Examples:
        >>> from polyfield.conic import VariableRegistry
        >>> c = CandidateParam.declare(VariableRegistry(), 2, 3)
        >>> len(compile_interp(c, [([0.0, 0.0], [0.0, 0.0])]).equalities)
        2
    """
    fragment = Fragment(name)
    seen: List[Tuple[np.ndarray, np.ndarray]] = []
    for k, (x, y) in enumerate(points):
        x_arr = np.asarray(x, dtype=float)
        y_arr = np.asarray(y, dtype=float)
        if x_arr.shape != (candidate.n,) or y_arr.shape != (candidate.n,):
            raise DimensionMismatchError(f"Interpolation point {k} has the wrong dimension")
        if domain is not None and not membership(domain, x_arr, POINT_TOL):
            raise InvalidInputError(f"Interpolation point {x_arr.tolist()} lies outside the domain")
        duplicate = False
        for x_prev, y_prev in seen:
            if np.array_equal(x_prev, x_arr):
                if not np.allclose(y_prev, y_arr, rtol=0.0, atol=AFFINE_TOL):
                    raise InfeasibleSideInfoError(
                        f"Contradictory interpolation values at {x_arr.tolist()}", [name]
                    )
                duplicate = True
        if duplicate:
            continue
        seen.append((x_arr, y_arr))
        for i, expr in enumerate(candidate.evaluate_at(x_arr)):
            if candidate.is_fixed(i):
                value = candidate.fixed[i].evaluate(x_arr)
                if abs(value - y_arr[i]) > AFFINE_TOL:
                    raise InfeasibleSideInfoError(
                        f"Fixed component {i + 1} takes {value:g} at {x_arr.tolist()}, "
                        f"interpolation requires {y_arr[i]:g}",
                        [name],
                    )
                continue
            fragment.add_equality(expr, float(y_arr[i]), f"pt{k}.f{i + 1}")
    return fragment


def compile_sym(
    candidate: CandidateParam,
    generators: Sequence[Tuple[np.ndarray, np.ndarray]],
    name: str = "sym",
) -> Fragment:
    """
    Coefficient-wise equalities p(sigma x) - rho p(x) == 0 per generator.

    Raises:
        InvalidInputError: If sigma or rho is singular
    """
    fragment = Fragment(name)
    n = candidate.n
    for g, (sigma, rho) in enumerate(generators):
        sigma = np.asarray(sigma, dtype=float)
        rho = np.asarray(rho, dtype=float)
        if sigma.shape != (n, n) or rho.shape != (n, n):
            raise DimensionMismatchError(f"Symmetry generator {g} is not {n}x{n}")
        for label, mat in (("sigma", sigma), ("rho", rho)):
            if np.linalg.matrix_rank(mat) < n:
                raise InvalidInputError(f"Symmetry generator {g}: {label} is singular")
        composed = [candidate.component(i).compose_linear(sigma) for i in range(n)]
        for i in range(n):
            residual = composed[i]
            for j in range(n):
                if rho[i, j] != 0.0:
                    residual = residual - candidate.component(j).scale(rho[i, j])
            emit_identity(fragment, residual, f"g{g}.f{i + 1}.")
    return fragment


def _sign_blocks(
    target: AffinePoly,
    nonneg: Sequence[BasicSemialgebraicSet],
    nonpos: Sequence[BasicSemialgebraicSet],
    r: int,
    registry: VariableRegistry,
    stem: str,
) -> List[ConstraintBlocks]:
    blocks = []
    for k, region in enumerate(nonneg):
        blocks.append(putinar_blocks(target, region, r, registry, f"{stem}.pos{k}"))
    for k, region in enumerate(nonpos):
        blocks.append(putinar_blocks(-target, region, r, registry, f"{stem}.neg{k}"))
    return blocks


def compile_pos(
    candidate: CandidateParam,
    regions: Sequence[SignRegion],
    r: int,
    registry: VariableRegistry,
    name: str = "pos",
) -> List[ConstraintBlocks]:
    """One Putinar block per nonneg set (target p_i) and nonpos set (target -p_i)."""
    blocks: List[ConstraintBlocks] = []
    for region in regions:
        blocks += _sign_blocks(
            candidate.component(region.component),
            region.nonneg,
            region.nonpos,
            r,
            registry,
            f"{name}.f{region.component + 1}",
        )
    return blocks


def compile_mon(
    candidate: CandidateParam,
    regions: Sequence[MonotoneRegion],
    r: int,
    registry: VariableRegistry,
    name: str = "mon",
) -> List[ConstraintBlocks]:
    """Putinar blocks with targets +/- dp_i/dx_j."""
    blocks: List[ConstraintBlocks] = []
    for region in regions:
        target = candidate.component(region.component).differentiate(region.variable)
        blocks += _sign_blocks(
            target,
            region.nonneg,
            region.nonpos,
            r,
            registry,
            f"{name}.d{region.component + 1}x{region.variable + 1}",
        )
    return blocks


def composite_expression(candidate: CandidateParam, terms: Sequence[CompositeTerm]) -> AffinePoly:
    expr = AffinePoly.zero(candidate.n)
    for term in terms:
        part = candidate.component(term.component)
        if term.derivative is not None:
            part = part.differentiate(term.derivative)
        expr = expr + part.multiply(term.multiplier)
    return expr


def compile_composite(
    candidate: CandidateParam,
    terms: Sequence[CompositeTerm],
    nonneg: Sequence[BasicSemialgebraicSet],
    nonpos: Sequence[BasicSemialgebraicSet],
    r: int,
    registry: VariableRegistry,
    name: str = "composite",
) -> List[ConstraintBlocks]:
    """Sign constraints on sum_t multiplier_t * (d) p_{i_t}."""
    return _sign_blocks(
        composite_expression(candidate, terms), nonneg, nonpos, r, registry, name
    )


def invariance_target(candidate: CandidateParam, h: MultiPoly) -> AffinePoly:
    """<p, grad h> as an affine polynomial."""
    target = AffinePoly.zero(candidate.n)
    for i in range(candidate.n):
        target = target + candidate.component(i).multiply(h.differentiate(i))
    return target


def compile_inv(
    candidate: CandidateParam,
    sets: Sequence[BasicSemialgebraicSet],
    r: int,
    registry: VariableRegistry,
    domain: BasicSemialgebraicSet,
    name: str = "inv",
) -> List[ConstraintBlocks]:
    """
    For each set B and each defining h of B, certify <p, grad h> >= 0 on
    B intersected with the domain and {h = 0}.

    Examples:
        >>> from polyfield.conic import VariableRegistry
        >>> from polyfield.semialg import box_set
        >>> registry = VariableRegistry()
        >>> c = CandidateParam.declare(registry, 2, 3)
        >>> box = box_set([0, 0], [1, 1])
        >>> blocks = compile_inv(c, [box], 2, registry, box)
        >>> sum(len(b.psd_blocks) for b in blocks)
        8
    """
    blocks: List[ConstraintBlocks] = []
    for s, B in enumerate(sets):
        for f, face in enumerate(boundary_faces(B, domain)):
            target = invariance_target(candidate, face.boundary)
            if face.substitution is not None:
                M, b = face.substitution
                target = target.compose_affine(M, b)
            blocks.append(
                putinar_blocks(
                    target,
                    face.set,
                    r,
                    registry,
                    f"{name}.B{s}.h{f}",
                    include_sigma0=face.include_sigma0,
                )
            )
    return blocks


def _potential(candidate: CandidateParam, registry: VariableRegistry, group: str) -> AffinePoly:
    basis = [m for m in monomial_basis(candidate.n, candidate.degree + 1) if sum(m) > 0]
    declared = registry.declare(group, ConeKind.FREE, len(basis))
    return AffinePoly.from_variables(candidate.n, basis, list(declared.indices))


def compile_grad(
    candidate: CandidateParam, registry: VariableRegistry, name: str = "grad"
) -> Tuple[Fragment, AffinePoly]:
    """
    Introduce V of degree d+1 (constant pinned to zero) and impose p = -grad V.

    Returns:
        The equality fragment and V
    """
    fragment = Fragment(name)
    V = _potential(candidate, registry, registry.fresh_name(f"{name}/V"))
    for i in range(candidate.n):
        emit_identity(fragment, candidate.component(i) + V.differentiate(i), f"f{i + 1}.")
    return fragment, V


def compile_ham(
    candidate: CandidateParam, registry: VariableRegistry, name: str = "ham"
) -> Tuple[Fragment, AffinePoly]:
    """
    Introduce H of degree d+1 (constant pinned to zero) and impose
    p_i = -dH/dx_{k+i}, p_{k+i} = dH/dx_i with k = n/2.

    Raises:
        InvalidInputError: If n is odd
    """
    n = candidate.n
    if n % 2:
        raise InvalidInputError(f"Hamiltonian structure needs an even dimension, got {n}")
    k = n // 2
    fragment = Fragment(name)
    H = _potential(candidate, registry, registry.fresh_name(f"{name}/H"))
    for i in range(k):
        emit_identity(fragment, candidate.component(i) + H.differentiate(k + i), f"f{i + 1}.")
        emit_identity(fragment, candidate.component(k + i) - H.differentiate(i), f"f{k + i + 1}.")
    return fragment, H
