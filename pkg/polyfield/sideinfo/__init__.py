"""
Side information: candidate parameterization, compilers to affine and SOS
constraints, and the residual functionals used for delta-satisfiability.
"""

from .base import CompiledSideInfo, ResidualReport, SideInfo, emit_identity
from .candidate import CandidateParam
from .compilers import (
    CompositeTerm,
    Face,
    MonotoneRegion,
    SignRegion,
    boundary_faces,
    compile_composite,
    compile_grad,
    compile_ham,
    compile_interp,
    compile_inv,
    compile_mon,
    compile_pos,
    compile_sym,
    composite_expression,
    invariance_target,
)
from .items import Composite, Grad, Ham, Interp, Inv, Mon, Pos, Sym, residual_functional
from .residuals import fit_potential

__all__ = [
    "CandidateParam",
    "CompiledSideInfo",
    "Composite",
    "CompositeTerm",
    "Face",
    "Grad",
    "Ham",
    "Interp",
    "Inv",
    "Mon",
    "MonotoneRegion",
    "Pos",
    "ResidualReport",
    "SideInfo",
    "SignRegion",
    "Sym",
    "boundary_faces",
    "compile_composite",
    "compile_grad",
    "compile_ham",
    "compile_interp",
    "compile_inv",
    "compile_mon",
    "compile_pos",
    "compile_sym",
    "composite_expression",
    "emit_identity",
    "fit_potential",
    "invariance_target",
    "residual_functional",
]
