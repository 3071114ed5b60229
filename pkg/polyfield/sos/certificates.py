"""
Putinar certificates: extraction from a solved program and independent
verification by exact re-expansion.
"""

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from ..conic import ConicProgram
from ..errors import CertificateError
from ..poly import Monomial, MultiPoly
from ..semialg import BasicSemialgebraicSet
from .blocks import ConstraintBlocks

RESIDUAL_TOL = 1e-6
EIGENVALUE_TOL = 1e-7


@dataclass
class GramCertificate:
    """sigma(x) = z(x)^T Q z(x)."""

    basis: List[Monomial]
    Q: np.ndarray

    def __post_init__(self):
        self.Q = np.asarray(self.Q, dtype=float).reshape(len(self.basis), len(self.basis))

    def polynomial(self, n: int) -> MultiPoly:
        terms: Dict[Monomial, float] = {}
        for a, za in enumerate(self.basis):
            for b, zb in enumerate(self.basis):
                mono = tuple(x + y for x, y in zip(za, zb))
                terms[mono] = terms.get(mono, 0.0) + self.Q[a, b]
        return MultiPoly(n, terms)

    def min_eigenvalue(self) -> float:
        if not len(self.basis):
            return 0.0
        sym = 0.5 * (self.Q + self.Q.T)
        return float(np.linalg.eigvalsh(sym)[0])

    def to_json(self) -> Dict[str, Any]:
        return {"basis": [list(m) for m in self.basis], "Q": self.Q.tolist()}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "GramCertificate":
        return cls([tuple(m) for m in data["basis"]], np.array(data["Q"], dtype=float))


@dataclass
class PutinarCertificate:
    """
    sigma_0 + sum sigma_i g_i + sum lambda_j h_j, with the generators of the
    certified set in ``certificate_inequalities`` order.
    """

    sigma: List[GramCertificate]
    lambdas: List[MultiPoly] = field(default_factory=list)
    include_sigma0: bool = True

    def to_json(self) -> Dict[str, Any]:
        return {
            "sigma": [s.to_json() for s in self.sigma],
            "lambda": [lam.to_pairs() for lam in self.lambdas],
            "include_sigma0": self.include_sigma0,
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any], n: int) -> "PutinarCertificate":
        return cls(
            [GramCertificate.from_json(s) for s in data["sigma"]],
            [MultiPoly.from_pairs(p, n) for p in data.get("lambda", [])],
            bool(data.get("include_sigma0", True)),
        )

    def digest(self) -> str:
        text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class CertificateReport:
    max_residual: float
    min_eigenvalue: float

    @property
    def valid(self) -> bool:
        return self.max_residual <= RESIDUAL_TOL and self.min_eigenvalue >= -EIGENVALUE_TOL

    def to_json(self) -> Dict[str, Any]:
        return {
            "max_residual": self.max_residual,
            "min_eigenvalue": self.min_eigenvalue,
            "valid": self.valid,
        }


def extract_certificate(
    blocks: ConstraintBlocks, program: ConicProgram, x: np.ndarray
) -> PutinarCertificate:
    """Read the Gram matrices and free multipliers of ``blocks`` out of x."""
    n = blocks.target.n
    sigma = [
        GramCertificate(block.basis, program.psd_matrix(x, block.group))
        for block in blocks.psd_blocks
    ]
    lambdas = [
        MultiPoly.from_coefficients(n, mult.basis, program.values(x, mult.group))
        for mult in blocks.free_multipliers
    ]
    return PutinarCertificate(sigma, lambdas, blocks.include_sigma0)


def verify_certificate(
    cert: PutinarCertificate, target: MultiPoly, S: BasicSemialgebraicSet
) -> CertificateReport:
    """
    Re-expand a certificate and compare it with ``target``.

    Args:
        cert: Certificate to check
        target: Concrete polynomial the certificate claims nonnegative on S
        S: Certified set

    Returns:
        Maximal coefficient residual and minimal Gram eigenvalue; the report
        is valid iff residual <= 1e-6 and eigenvalue >= -1e-7

    Raises:
        CertificateError: If the multiplier counts do not match S

    Examples:
        >>> from polyfield.semialg import BasicSemialgebraicSet
        >>> zero = PutinarCertificate([GramCertificate([(0,)], [[0.0]])])
        >>> verify_certificate(zero, MultiPoly.zero(1), BasicSemialgebraicSet(1)).valid
        True
    """
    generators = S.certificate_inequalities()
    expected = len(generators) + (1 if cert.include_sigma0 else 0)
    if len(cert.sigma) != expected:
        raise CertificateError(
            f"Certificate has {len(cert.sigma)} SOS multipliers, set needs {expected}"
        )
    if len(cert.lambdas) != len(S.equalities):
        raise CertificateError(
            f"Certificate has {len(cert.lambdas)} equality multipliers, "
            f"set has {len(S.equalities)}"
        )

    n = target.n
    multipliers = ([MultiPoly.constant(n, 1.0)] if cert.include_sigma0 else []) + generators
    total = MultiPoly.zero(n)
    for sigma, g in zip(cert.sigma, multipliers):
        total = total + sigma.polynomial(n) * g
    for lam, h in zip(cert.lambdas, S.equalities):
        total = total + lam * h

    residual = total.max_coefficient_difference(target)
    min_eig = min((s.min_eigenvalue() for s in cert.sigma), default=0.0)
    return CertificateReport(residual, min_eig)
