"""
Constrained fitting of polynomial vector fields.
"""

from .assemble import AssembledProblem, assemble
from .fit import fit
from .model import LearnedModel, ModelCertificate
from .problem import LearningProblem, compute_loss

__all__ = [
    "AssembledProblem",
    "LearnedModel",
    "LearningProblem",
    "ModelCertificate",
    "assemble",
    "compute_loss",
    "fit",
]
