"""
Closed basic semialgebraic sets {x : g_i(x) >= 0, h_j(x) = 0}.

Boxes are stored as 2n affine facets plus the radius of the ball around the
origin that contains them. The ball constraint R^2 - |x|^2 is only added to
the generators when an SOS certificate is compiled; membership never sees it.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatchError, InvalidInputError
from ..poly import MultiPoly

logger = logging.getLogger(__name__)

Bounds = Tuple[Tuple[float, ...], Tuple[float, ...]]


@dataclass(frozen=True)
class BasicSemialgebraicSet:
    """
    Set described by polynomial inequalities (>= 0) and equalities (= 0).

    Attributes:
        n: Ambient dimension
        inequalities: Polynomials g_i, each read as g_i(x) >= 0
        equalities: Polynomials h_j, each read as h_j(x) = 0
        archimedean_radius: Radius R of a ball known to contain the set
        bounds: Optional bounding box (lo, hi) used for grid sampling

    Examples:
        >>> S = box_set([0, 0], [1, 1])
        >>> len(S.inequalities), S.archimedean_radius
        (4, 1.4142135623730951)
        >>> S.contains([0.5, 0.5])
        True
    """

    n: int
    inequalities: Tuple[MultiPoly, ...] = ()
    equalities: Tuple[MultiPoly, ...] = ()
    archimedean_radius: Optional[float] = None
    bounds: Optional[Bounds] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        object.__setattr__(self, "equalities", tuple(self.equalities))
        for poly in self.inequalities + self.equalities:
            if poly.n != self.n:
                raise DimensionMismatchError(
                    f"Set over {self.n} variables got a polynomial over {poly.n}"
                )
        if self.archimedean_radius is not None and self.archimedean_radius <= 0:
            raise InvalidInputError("Archimedean radius must be positive")
        if self.bounds is not None:
            lo, hi = self.bounds
            object.__setattr__(
                self, "bounds", (tuple(float(v) for v in lo), tuple(float(v) for v in hi))
            )

    @classmethod
    def whole_space(cls, n: int) -> "BasicSemialgebraicSet":
        return cls(n)

    def is_whole_space(self) -> bool:
        return not self.inequalities and not self.equalities

    def is_polytope(self) -> bool:
        """Only affine inequalities and no equalities."""
        return (
            bool(self.inequalities)
            and not self.equalities
            and all(g.degree() <= 1 for g in self.inequalities)
        )

    def ball_polynomial(self) -> Optional[MultiPoly]:
        """R^2 - sum x_i^2, or None when no radius is attached."""
        if self.archimedean_radius is None:
            return None
        ball = MultiPoly.constant(self.n, self.archimedean_radius**2)
        for j in range(self.n):
            x = MultiPoly.variable(self.n, j)
            ball = ball - x * x
        return ball

    def certificate_inequalities(self) -> List[MultiPoly]:
        """Generators used by Putinar compilation, ball included when set."""
        out = list(self.inequalities)
        ball = self.ball_polynomial()
        if ball is not None:
            out.append(ball)
        return out

    def contains(self, x, tol: float = 1e-9) -> bool:
        return membership(self, x, tol)

    def intersect(self, other: "BasicSemialgebraicSet") -> "BasicSemialgebraicSet":
        """Intersection; identical generators are kept once."""
        if other.n != self.n:
            raise DimensionMismatchError("Cannot intersect sets of different dimension")

        def merge(a: Sequence[MultiPoly], b: Sequence[MultiPoly]) -> List[MultiPoly]:
            out: List[MultiPoly] = []
            for poly in list(a) + list(b):
                if poly not in out:
                    out.append(poly)
            return out

        radii = [r for r in (self.archimedean_radius, other.archimedean_radius) if r]
        bounds = self.bounds
        if bounds is None:
            bounds = other.bounds
        elif other.bounds is not None:
            bounds = (
                tuple(max(a, b) for a, b in zip(self.bounds[0], other.bounds[0])),
                tuple(min(a, b) for a, b in zip(self.bounds[1], other.bounds[1])),
            )
        return BasicSemialgebraicSet(
            self.n,
            merge(self.inequalities, other.inequalities),
            merge(self.equalities, other.equalities),
            min(radii) if radii else None,
            bounds,
        )

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "n": self.n,
            "ineq": [g.to_pairs() for g in self.inequalities],
            "eq": [h.to_pairs() for h in self.equalities],
        }
        if self.archimedean_radius is not None:
            data["radius"] = self.archimedean_radius
        if self.bounds is not None:
            data["bounds"] = {"lo": list(self.bounds[0]), "hi": list(self.bounds[1])}
        return data

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "BasicSemialgebraicSet":
        """
        Decode a set. A ``box`` entry is expanded through ``box_set`` and
        intersected with any explicit ``ineq``/``eq`` generators.
        """
        base: Optional[BasicSemialgebraicSet] = None
        if "box" in data:
            base = box_set(data["box"]["lo"], data["box"]["hi"])
        n = int(data.get("n", base.n if base is not None else 0))
        if n < 1:
            raise InvalidInputError("Set description needs 'n' or 'box'")
        bounds = None
        if "bounds" in data:
            bounds = (tuple(data["bounds"]["lo"]), tuple(data["bounds"]["hi"]))
        explicit = cls(
            n,
            [MultiPoly.from_pairs(p, n) for p in data.get("ineq", [])],
            [MultiPoly.from_pairs(p, n) for p in data.get("eq", [])],
            data.get("radius"),
            bounds,
        )
        return base.intersect(explicit) if base is not None else explicit


def box_set(lo: Sequence[float], hi: Sequence[float]) -> BasicSemialgebraicSet:
    """
    Axis-aligned box as 2n affine facets.

    Facets come in the order x_i - lo_i for every i, then hi_i - x_i. The
    attached radius is that of the smallest origin-centred ball containing
    the box.

    Args:
        lo: Lower corner
        hi: Upper corner

    Returns:
        The box as a BasicSemialgebraicSet

    Raises:
        InvalidInputError: If lo_i >= hi_i for some i

    Examples:
        >>> box_set([-np.pi, -np.pi], [np.pi, np.pi]).archimedean_radius
        4.442882938158366
    """
    lo_arr = np.asarray(lo, dtype=float)
    hi_arr = np.asarray(hi, dtype=float)
    if lo_arr.shape != hi_arr.shape or lo_arr.ndim != 1:
        raise DimensionMismatchError("Box corners must be vectors of equal length")
    if np.any(lo_arr >= hi_arr):
        raise InvalidInputError(f"Box needs lo < hi componentwise, got {lo} and {hi}")
    n = lo_arr.size
    lower = [MultiPoly.variable(n, j) - float(lo_arr[j]) for j in range(n)]
    upper = [float(hi_arr[j]) - MultiPoly.variable(n, j) for j in range(n)]
    radius = float(np.sqrt(np.sum(np.maximum(lo_arr**2, hi_arr**2))))
    return BasicSemialgebraicSet(
        n, lower + upper, (), radius, (tuple(lo_arr), tuple(hi_arr))
    )


def halfspace(coefficients: Sequence[float], offset: float = 0.0) -> BasicSemialgebraicSet:
    """The set {x : a . x + offset >= 0} with no radius attached."""
    n = len(coefficients)
    g = MultiPoly.constant(n, offset)
    for j, a in enumerate(coefficients):
        g = g + MultiPoly.variable(n, j) * float(a)
    return BasicSemialgebraicSet(n, [g])


def membership(S: BasicSemialgebraicSet, x, tol: float = 1e-9) -> bool:
    """
    True iff every inequality is >= -tol and every equality is within tol.

    Raises:
        DimensionMismatchError: If x does not have S.n coordinates
    """
    point = np.asarray(x, dtype=float)
    if point.shape != (S.n,):
        raise DimensionMismatchError(
            f"Point of shape {point.shape} for a set in dimension {S.n}"
        )
    if tol < 0:
        raise InvalidInputError("Tolerance must be nonnegative")
    return bool(membership_mask(S, point[None, :], tol)[0])


def membership_mask(S: BasicSemialgebraicSet, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Vectorised membership over an (N, n) array."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    mask = np.ones(points.shape[0], dtype=bool)
    for g in S.inequalities:
        mask &= g.evaluate(points) >= -tol
    for h in S.equalities:
        mask &= np.abs(h.evaluate(points)) <= tol
    return mask
