"""
Compiling "q(x) >= 0 on a set" into conic constraint blocks.

A target polynomial with affine decision-variable coefficients is matched,
monomial by monomial, against

    sigma_0 + sum_i sigma_i g_i + sum_j lambda_j h_j

where every sigma is z^T Q z with Q a PSD block and every lambda is a free
polynomial. Bases are restricted to the variables that actually occur.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

from ..conic import Fragment, VariableRegistry
from ..errors import DegreeError
from ..poly import (
    CONSTANT,
    AffinePoly,
    LinearExpr,
    Monomial,
    MultiPoly,
    add_exprs,
    graded_lex_key,
    monomial_basis,
    restricted_basis,
)
from ..semialg import BasicSemialgebraicSet
from ..types import ConeKind

logger = logging.getLogger(__name__)

Target = Union[AffinePoly, MultiPoly]


@dataclass
class GramBlock:
    """PSD group whose Gram form multiplies ``multiplier``."""

    group: str
    basis: List[Monomial]
    multiplier: MultiPoly


@dataclass
class FreeMultiplier:
    """Sign-free polynomial multiplier of an equality generator."""

    group: str
    basis: List[Monomial]
    equality: MultiPoly


@dataclass
class ConstraintBlocks(Fragment):
    """Coefficient-matching equalities plus the blocks they reference."""

    target: Optional[AffinePoly] = None
    domain: Optional[BasicSemialgebraicSet] = None
    psd_blocks: List[GramBlock] = field(default_factory=list)
    free_multipliers: List[FreeMultiplier] = field(default_factory=list)
    include_sigma0: bool = True
    identity_degree: int = 0


def _as_affine(target: Target) -> AffinePoly:
    return AffinePoly.from_poly(target) if isinstance(target, MultiPoly) else target


def monomial_label(monomial: Monomial) -> str:
    return "c" + "_".join(str(e) for e in monomial)


def _declare_gram(
    registry: VariableRegistry,
    stem: str,
    basis: List[Monomial],
    multiplier: MultiPoly,
    identity: Dict[Monomial, LinearExpr],
) -> GramBlock:
    name = registry.fresh_name(stem)
    registry.declare(name, ConeKind.PSD, len(basis))
    for a in range(len(basis)):
        for b in range(a, len(basis)):
            idx, factor = registry.psd_entry(name, a, b)
            weight = factor * (1.0 if a == b else 2.0)
            zz = tuple(x + y for x, y in zip(basis[a], basis[b]))
            for m_g, c_g in multiplier.terms.items():
                mono = tuple(x + y for x, y in zip(zz, m_g))
                identity[mono] = add_exprs(identity.get(mono, {}), {idx: weight * c_g})
    return GramBlock(name, basis, multiplier)


def _declare_free(
    registry: VariableRegistry,
    stem: str,
    basis: List[Monomial],
    equality: MultiPoly,
    identity: Dict[Monomial, LinearExpr],
) -> FreeMultiplier:
    name = registry.fresh_name(stem)
    group = registry.declare(name, ConeKind.FREE, len(basis))
    for k, mono_l in enumerate(basis):
        idx = group.offset + k
        for m_h, c_h in equality.terms.items():
            mono = tuple(x + y for x, y in zip(mono_l, m_h))
            identity[mono] = add_exprs(identity.get(mono, {}), {idx: c_h})
    return FreeMultiplier(name, basis, equality)


def _emit_matching(
    blocks: ConstraintBlocks,
    identity: Dict[Monomial, LinearExpr],
    target: AffinePoly,
    monomials: Sequence[Monomial],
) -> None:
    rows = set(monomials) | set(identity) | set(target.monomials())
    for mono in sorted(rows, key=graded_lex_key):
        t = target.coefficient(mono)
        lhs = add_exprs(identity.get(mono, {}), {k: v for k, v in t.items() if k != CONSTANT}, -1.0)
        blocks.add_equality(lhs, t.get(CONSTANT, 0.0), monomial_label(mono))


def _largest_even(d: int) -> int:
    return d - (d % 2)


def gram_parameterization(
    target: Target,
    deg: int,
    registry: VariableRegistry,
    name: str = "sos",
    variables: Optional[Sequence[int]] = None,
) -> ConstraintBlocks:
    """
    Constrain ``target`` to be a sum of squares z^T Q z of degree ``deg``.

    Args:
        target: Polynomial, possibly with affine decision-variable coefficients
        deg: Even degree, at least the degree of ``target``
        registry: Registry receiving the Gram block
        name: Fragment name (row-label prefix)
        variables: Restrict z to monomials in these variables

    Returns:
        ConstraintBlocks with one PSD block of side C(n+deg/2, n) and one
        matching equality per monomial of degree <= deg

    Raises:
        DegreeError: If deg is odd or below the target degree

    Examples:
        >>> from polyfield.conic import VariableRegistry
        >>> blocks = gram_parameterization(MultiPoly.constant(2, 1.0), 2, VariableRegistry())
        >>> len(blocks.psd_blocks[0].basis), len(blocks.equalities)
        (3, 6)
    """
    target = _as_affine(target)
    if deg % 2 or deg < 0:
        raise DegreeError(f"Gram degree must be even and nonnegative, got {deg}")
    if target.degree() > deg:
        raise DegreeError(f"Target of degree {target.degree()} exceeds Gram degree {deg}")
    n = target.n
    if variables is None:
        half = monomial_basis(n, deg // 2)
        full = monomial_basis(n, deg)
    else:
        half = restricted_basis(n, deg // 2, variables)
        full = restricted_basis(n, deg, variables)

    blocks = ConstraintBlocks(name=name, target=target, identity_degree=deg)
    identity: Dict[Monomial, LinearExpr] = {}
    blocks.psd_blocks.append(
        _declare_gram(registry, f"{name}/sigma0", half, MultiPoly.constant(n, 1.0), identity)
    )
    _emit_matching(blocks, identity, target, full)
    return blocks


def putinar_blocks(
    target: Target,
    S: BasicSemialgebraicSet,
    r: int,
    registry: VariableRegistry,
    name: str = "putinar",
    include_sigma0: bool = True,
) -> ConstraintBlocks:
    """
    Degree-r Putinar certificate that ``target`` is nonnegative on S.

    The identity degree is D = max(deg target, r + max deg of the
    generators). Each sigma_i gets degree min(r, largest even <= D - deg g_i),
    sigma_0 the largest even degree <= D, and each equality generator a free
    multiplier of degree D - deg h_j. The Archimedean ball is appended when S
    carries a radius.

    Args:
        target: Polynomial to certify, affine in decision variables
        S: Set on which nonnegativity is required
        r: Even multiplier degree
        registry: Registry receiving Gram and multiplier groups
        name: Fragment name
        include_sigma0: Emit the free SOS term sigma_0

    Returns:
        ConstraintBlocks carrying every Gram block and matching equality

    Raises:
        DegreeError: If r is odd or negative

    Examples:
        >>> from polyfield.conic import VariableRegistry
        >>> from polyfield.semialg import box_set
        >>> x = MultiPoly.variable(1, 0)
        >>> S = box_set([0.0], [1.0])
        >>> blocks = putinar_blocks(x * (1 - x), S, 2, VariableRegistry())
        >>> len(blocks.psd_blocks)
        4
    """
    target = _as_affine(target)
    if r < 0 or r % 2:
        raise DegreeError(f"Multiplier degree must be even and nonnegative, got {r}")
    if S.n != target.n:
        raise DegreeError(f"Target over {target.n} variables, set over {S.n}")

    generators = S.certificate_inequalities()
    equalities = list(S.equalities)
    if not generators and not equalities:
        deg = target.degree() + target.degree() % 2
        return gram_parameterization(target, deg, registry, name, target.variables() or None)

    n = target.n
    active = set(target.variables())
    for poly in generators + equalities:
        active.update(poly.variables())
    active_list = sorted(active)

    max_gen = max((p.degree() for p in generators + equalities), default=0)
    D = max(target.degree(), r + max_gen)

    blocks = ConstraintBlocks(
        name=name,
        target=target,
        domain=S,
        include_sigma0=include_sigma0,
        identity_degree=D,
    )
    identity: Dict[Monomial, LinearExpr] = {}
    if include_sigma0:
        half = restricted_basis(n, _largest_even(D) // 2, active_list)
        blocks.psd_blocks.append(
            _declare_gram(registry, f"{name}/sigma0", half, MultiPoly.constant(n, 1.0), identity)
        )
    for i, g in enumerate(generators, start=1):
        sigma_deg = min(r, _largest_even(D - g.degree()))
        if sigma_deg < 0:
            raise DegreeError(f"Generator {i} of degree {g.degree()} leaves no room in degree {D}")
        if sigma_deg + g.degree() > D:
            raise DegreeError(f"Multiplier {i} exceeds identity degree {D}")
        half = restricted_basis(n, sigma_deg // 2, active_list)
        blocks.psd_blocks.append(_declare_gram(registry, f"{name}/sigma{i}", half, g, identity))
    for j, h in enumerate(equalities, start=1):
        lam_deg = D - h.degree()
        if lam_deg < 0:
            raise DegreeError(f"Equality {j} of degree {h.degree()} exceeds identity degree {D}")
        basis = restricted_basis(n, lam_deg, active_list)
        blocks.free_multipliers.append(
            _declare_free(registry, f"{name}/lambda{j}", basis, h, identity)
        )

    _emit_matching(blocks, identity, target, restricted_basis(n, D, active_list))
    logger.debug(
        f"Putinar block {name}: identity degree {D}, {len(blocks.psd_blocks)} Gram blocks, "
        f"{len(blocks.equalities)} equalities"
    )
    return blocks
