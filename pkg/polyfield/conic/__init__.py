"""
Conic programs: variable registry, program assembly, the reference solver
and the standard-form text format.
"""

from .program import (
    SQRT2,
    ConicProgram,
    Fragment,
    LinearEquality,
    VariableGroup,
    VariableRegistry,
    build_program,
    smat,
    svec,
    svec_dimension,
    svec_position,
)
from .solver import (
    Elimination,
    Solution,
    available_backends,
    eliminate_free,
    presolve,
    register_backend,
    solve,
)
from .standard_form import (
    export_standard_form,
    format_standard_form,
    import_standard_form,
    parse_standard_form,
)

__all__ = [
    "SQRT2",
    "ConicProgram",
    "Elimination",
    "Fragment",
    "LinearEquality",
    "Solution",
    "VariableGroup",
    "VariableRegistry",
    "available_backends",
    "build_program",
    "eliminate_free",
    "export_standard_form",
    "format_standard_form",
    "import_standard_form",
    "parse_standard_form",
    "presolve",
    "register_backend",
    "smat",
    "solve",
    "svec",
    "svec_dimension",
    "svec_position",
]
