"""
Grid estimates of the residual functionals L_{S, Omega}.

Each function returns a ResidualReport whose value is zero exactly when the
field satisfies the side information at every sample. The infimum over
potentials in the gradient and Hamiltonian functionals is approximated by a
least-squares fit of a polynomial potential on the grid, followed by the max
residual of that fit.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..dynamics.fields import FieldHandle, evaluate_batch, jacobian_batch
from ..errors import EmptyGridError, InvalidInputError
from ..poly import MultiPoly, PolyVec, monomial_basis
from ..semialg import BasicSemialgebraicSet, grid_sample, membership_mask, refinement_axis
from ..types import SideInfoTag
from .base import ResidualReport, worst
from .compilers import CompositeTerm, Face, MonotoneRegion, SignRegion, boundary_faces

logger = logging.getLogger(__name__)

FACE_TOL = 1e-9
DEFAULT_POTENTIAL_DEGREE = 6


def _region_points(
    region: BasicSemialgebraicSet, domain: BasicSemialgebraicSet, resolution: int
) -> np.ndarray:
    if region.bounds is not None:
        return grid_sample(region, resolution=resolution, nested=True).points
    return grid_sample(region, domain.bounds[0], domain.bounds[1], resolution, nested=True).points


def _signed_max(
    values_pos: List[Tuple[np.ndarray, np.ndarray]],
    values_neg: List[Tuple[np.ndarray, np.ndarray]],
) -> Tuple[float, Optional[List[float]]]:
    best, where = 0.0, None
    for values, points in values_pos:
        v, p = worst(-values, points)
        if v > best:
            best, where = v, p
    for values, points in values_neg:
        v, p = worst(values, points)
        if v > best:
            best, where = v, p
    return best, where


def residual_interp(
    field: FieldHandle, points: Sequence[Tuple[Sequence[float], Sequence[float]]], resolution: int = 0
) -> ResidualReport:
    """max_i |f(x_i) - y_i|."""
    if not points:
        return ResidualReport(SideInfoTag.INTERP, 0.0, resolution)
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    gaps = np.linalg.norm(evaluate_batch(field, xs) - ys, axis=1)
    value, where = worst(gaps, xs)
    return ResidualReport(SideInfoTag.INTERP, value, resolution, where)


def residual_sym(
    field: FieldHandle,
    generators: Sequence[Tuple[np.ndarray, np.ndarray]],
    domain: BasicSemialgebraicSet,
    resolution: int = 50,
) -> ResidualReport:
    """max over generators, grid points and components of |f(sigma x) - rho f(x)|."""
    grid = grid_sample(domain, resolution=resolution).points
    base = evaluate_batch(field, grid)
    best, where = 0.0, None
    for sigma, rho in generators:
        sigma = np.asarray(sigma, dtype=float)
        rho = np.asarray(rho, dtype=float)
        moved = evaluate_batch(field, grid @ sigma.T)
        gap = np.max(np.abs(moved - base @ rho.T), axis=1)
        v, p = worst(gap, grid)
        if v > best:
            best, where = v, p
    return ResidualReport(SideInfoTag.SYM, best, resolution, where)


def residual_pos(
    field: FieldHandle,
    regions: Sequence[SignRegion],
    domain: BasicSemialgebraicSet,
    resolution: int = 50,
) -> ResidualReport:
    """max over components of max{0, max_P -f_i, max_N f_i}."""
    pos, neg = [], []
    for region in regions:
        for S in region.nonneg:
            pts = _region_points(S, domain, resolution)
            pos.append((evaluate_batch(field, pts)[:, region.component], pts))
        for S in region.nonpos:
            pts = _region_points(S, domain, resolution)
            neg.append((evaluate_batch(field, pts)[:, region.component], pts))
    value, where = _signed_max(pos, neg)
    return ResidualReport(SideInfoTag.POS, value, resolution, where)


def residual_mon(
    field: FieldHandle,
    regions: Sequence[MonotoneRegion],
    domain: BasicSemialgebraicSet,
    resolution: int = 50,
) -> ResidualReport:
    """max over (i, j) of max{0, max_P -df_i/dx_j, max_N df_i/dx_j}."""
    pos, neg = [], []
    for region in regions:
        i, j = region.component, region.variable
        for S in region.nonneg:
            pts = _region_points(S, domain, resolution)
            pos.append((jacobian_batch(field, pts)[:, i, j], pts))
        for S in region.nonpos:
            pts = _region_points(S, domain, resolution)
            neg.append((jacobian_batch(field, pts)[:, i, j], pts))
    value, where = _signed_max(pos, neg)
    return ResidualReport(SideInfoTag.MON, value, resolution, where)


def composite_values(field: FieldHandle, terms: Sequence[CompositeTerm], points: np.ndarray) -> np.ndarray:
    values = evaluate_batch(field, points)
    needs_jac = any(t.derivative is not None for t in terms)
    jac = jacobian_batch(field, points) if needs_jac else None
    total = np.zeros(points.shape[0])
    for term in terms:
        part = (
            values[:, term.component]
            if term.derivative is None
            else jac[:, term.component, term.derivative]
        )
        total += term.multiplier.evaluate(points) * part
    return total


def residual_composite(
    field: FieldHandle,
    terms: Sequence[CompositeTerm],
    nonneg: Sequence[BasicSemialgebraicSet],
    nonpos: Sequence[BasicSemialgebraicSet],
    domain: BasicSemialgebraicSet,
    resolution: int = 50,
) -> ResidualReport:
    pos = []
    neg = []
    for S in nonneg:
        pts = _region_points(S, domain, resolution)
        pos.append((composite_values(field, terms, pts), pts))
    for S in nonpos:
        pts = _region_points(S, domain, resolution)
        neg.append((composite_values(field, terms, pts), pts))
    value, where = _signed_max(pos, neg)
    return ResidualReport(SideInfoTag.COMPOSITE, value, resolution, where)


def face_points(face: Face, domain: BasicSemialgebraicSet, resolution: int) -> np.ndarray:
    """Grid samples of a boundary face in the original coordinates."""
    bounds = face.region.bounds or domain.bounds
    if bounds is None:
        raise InvalidInputError("Invariance residual needs a bounded domain")
    lo, hi = np.array(bounds[0], dtype=float), np.array(bounds[1], dtype=float)
    if face.substitution is not None:
        M, b = face.substitution
        lo[face.eliminated] = hi[face.eliminated] = 0.0
        axes = [refinement_axis(a, c, resolution) for a, c in zip(lo, hi)]
        mesh = np.meshgrid(*axes, indexing="ij")
        reduced = np.stack([m.ravel() for m in mesh], axis=1)
        candidates = reduced @ M.T + b
    else:
        axes = [refinement_axis(a, c, resolution) for a, c in zip(lo, hi)]
        mesh = np.meshgrid(*axes, indexing="ij")
        candidates = np.stack([m.ravel() for m in mesh], axis=1)
    keep = membership_mask(face.region, candidates, FACE_TOL)
    keep &= np.abs(face.boundary.evaluate(candidates)) <= FACE_TOL
    return candidates[keep]


def residual_inv(
    field: FieldHandle,
    sets: Sequence[BasicSemialgebraicSet],
    domain: BasicSemialgebraicSet,
    resolution: int = 50,
) -> ResidualReport:
    """max over faces {h = 0} of max{0, -<f, grad h>}."""
    best, where = 0.0, None
    sampled = 0
    for B in sets:
        for face in boundary_faces(B, domain):
            pts = face_points(face, domain, resolution)
            if not len(pts):
                logger.warning(f"No grid point on face {face.boundary} = 0")
                continue
            sampled += len(pts)
            grad = face.boundary.gradient().evaluate(pts)
            inner = np.sum(evaluate_batch(field, pts) * grad, axis=1)
            v, p = worst(-inner, pts)
            if v > best:
                best, where = v, p
    if sets and not sampled:
        raise EmptyGridError("No grid point lies on any invariance face")
    return ResidualReport(SideInfoTag.INV, best, resolution, where)


def _potential_basis(n: int, degree: int) -> List[Tuple[int, ...]]:
    return [m for m in monomial_basis(n, degree) if sum(m) > 0]


def _partials(basis, n: int, j: int, points: np.ndarray) -> np.ndarray:
    """Matrix of d m / d x_j over points, one column per monomial."""
    cols = [MultiPoly(n, {m: 1.0}).differentiate(j).evaluate(points) for m in basis]
    return np.stack(cols, axis=1)


def _resolve_potential_degree(field: FieldHandle, potential_degree: Optional[int]) -> int:
    if potential_degree is not None:
        return potential_degree
    if isinstance(field, PolyVec):
        return field.degree() + 1
    return DEFAULT_POTENTIAL_DEGREE


def fit_potential(
    field: FieldHandle,
    domain: BasicSemialgebraicSet,
    resolution: int,
    hamiltonian: bool,
    potential_degree: Optional[int] = None,
) -> Tuple[MultiPoly, np.ndarray, np.ndarray]:
    """
    Least-squares potential for the gradient (f = -grad V) or Hamiltonian
    (f_i = -dH/dx_{k+i}, f_{k+i} = dH/dx_i) structure.

    Returns:
        The fitted potential, the grid, and the per-point max residual
    """
    grid = grid_sample(domain, resolution=resolution).points
    n = grid.shape[1]
    degree = _resolve_potential_degree(field, potential_degree)
    basis = _potential_basis(n, degree)
    values = evaluate_batch(field, grid)
    finite = np.all(np.isfinite(values), axis=1)
    if not np.all(finite):
        logger.warning(f"Ignoring {int(np.sum(~finite))} grid points with non-finite field values")
        grid, values = grid[finite], values[finite]

    blocks, rhs = [], []
    if hamiltonian:
        if n % 2:
            raise InvalidInputError(f"Hamiltonian structure needs an even dimension, got {n}")
        k = n // 2
        for i in range(k):
            blocks.append(_partials(basis, n, k + i, grid))
            rhs.append(-values[:, i])
            blocks.append(-_partials(basis, n, i, grid))
            rhs.append(-values[:, k + i])
    else:
        for i in range(n):
            blocks.append(_partials(basis, n, i, grid))
            rhs.append(-values[:, i])
    design = np.vstack(blocks)
    target = np.concatenate(rhs)
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    residual = np.abs(design @ coef - target).reshape(len(blocks), -1)
    potential = MultiPoly.from_coefficients(n, basis, coef)
    return potential, grid, np.max(residual, axis=0)


def residual_grad(
    field: FieldHandle,
    domain: BasicSemialgebraicSet,
    resolution: int = 50,
    potential_degree: Optional[int] = None,
) -> ResidualReport:
    _, grid, per_point = fit_potential(field, domain, resolution, False, potential_degree)
    value, where = worst(per_point, grid)
    return ResidualReport(SideInfoTag.GRAD, value, resolution, where)


def residual_ham(
    field: FieldHandle,
    domain: BasicSemialgebraicSet,
    resolution: int = 50,
    potential_degree: Optional[int] = None,
) -> ResidualReport:
    _, grid, per_point = fit_potential(field, domain, resolution, True, potential_degree)
    value, where = worst(per_point, grid)
    return ResidualReport(SideInfoTag.HAM, value, resolution, where)
