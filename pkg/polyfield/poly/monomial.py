"""
Monomials and the graded-lexicographic basis.

A monomial is an exponent tuple. Every coefficient-matching step in the
package orders monomials with ``graded_lex_key``: ascending total degree,
then descending lexicographic exponents, so x1^2 precedes x1*x2 precedes x2^2.
"""

from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, List, Sequence, Tuple

from ..errors import DegreeError, DimensionMismatchError

Monomial = Tuple[int, ...]


def monomial_degree(monomial: Monomial) -> int:
    return sum(monomial)


def graded_lex_key(monomial: Monomial) -> Tuple[int, Tuple[int, ...]]:
    """Sort key realising the graded-lex order."""
    return (sum(monomial), tuple(-e for e in monomial))


def constant_monomial(n: int) -> Monomial:
    return (0,) * n


def unit_monomial(n: int, j: int) -> Monomial:
    exps = [0] * n
    exps[j] = 1
    return tuple(exps)


def multiply_monomials(a: Monomial, b: Monomial) -> Monomial:
    if len(a) != len(b):
        raise DimensionMismatchError(
            f"Monomials over {len(a)} and {len(b)} variables cannot be multiplied"
        )
    return tuple(x + y for x, y in zip(a, b))


@lru_cache(maxsize=256)
def _basis(n: int, d: int) -> Tuple[Monomial, ...]:
    out: List[Monomial] = []
    for degree in range(d + 1):
        for combo in combinations_with_replacement(range(n), degree):
            exps = [0] * n
            for var in combo:
                exps[var] += 1
            out.append(tuple(exps))
    out.sort(key=graded_lex_key)
    return tuple(out)


def monomial_basis(n: int, d: int) -> List[Monomial]:
    """
    Return every monomial in n variables of degree at most d.

    The list has exactly C(n+d, d) entries in graded-lex order.

    Args:
        n: Number of variables (at least 1)
        d: Maximal total degree (at least 0)

    Returns:
        Ordered list of exponent tuples

    Raises:
        DegreeError: If n < 1 or d < 0

    Examples:
        >>> monomial_basis(2, 2)
        [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        >>> len(monomial_basis(2, 3))
        10
    """
    if n < 1:
        raise DegreeError(f"Variable count must be at least 1, got {n}")
    if d < 0:
        raise DegreeError(f"Degree must be nonnegative, got {d}")
    return list(_basis(n, d))


def basis_size(n: int, d: int) -> int:
    return comb(n + d, d)


def restricted_basis(n: int, d: int, variables: Sequence[int]) -> List[Monomial]:
    """Graded-lex monomials of degree <= d using only the listed variables."""
    active = sorted(set(variables))
    if not active:
        return [constant_monomial(n)]
    out = []
    for sub in _basis(len(active), d):
        exps = [0] * n
        for var, e in zip(active, sub):
            exps[var] = e
        out.append(tuple(exps))
    out.sort(key=graded_lex_key)
    return out


def sort_monomials(monomials: Iterable[Monomial]) -> List[Monomial]:
    return sorted(set(monomials), key=graded_lex_key)
