"""
Sum-of-squares compilation (Gram and Putinar) and certificate checking.
"""

from .blocks import (
    ConstraintBlocks,
    FreeMultiplier,
    GramBlock,
    gram_parameterization,
    monomial_label,
    putinar_blocks,
)
from .certificates import (
    EIGENVALUE_TOL,
    RESIDUAL_TOL,
    CertificateReport,
    GramCertificate,
    PutinarCertificate,
    extract_certificate,
    verify_certificate,
)

__all__ = [
    "CertificateReport",
    "ConstraintBlocks",
    "EIGENVALUE_TOL",
    "FreeMultiplier",
    "GramBlock",
    "GramCertificate",
    "PutinarCertificate",
    "RESIDUAL_TOL",
    "extract_certificate",
    "gram_parameterization",
    "monomial_label",
    "putinar_blocks",
    "verify_certificate",
]
