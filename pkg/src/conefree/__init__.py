"""conefree: matrix-free first-order solver for sparse conic programs.

Solves min c.x s.t. Ax = b, x in a product of Lorentz cones, using a
two-factor splitting of A whose Gram matrices are diagonal, so every
iteration is gathers, scatter-adds and elementwise arithmetic.
"""

from .cones import ConeWorkview, in_cone, project_block, project_product
from .generate import GeneratedInstance, GenSpec, generate, generate_witnessed
from .fileio import (
    ParseError,
    parse_problem,
    parse_solution,
    trace_csv,
    write_problem,
    write_solution,
)
from .model import (
    ConeSpec,
    ProblemInstance,
    TripletMatrix,
    ValidationReport,
    validate,
)
from .oracle import DenseMirror, dense_assemble, dense_iterate
from .solver import (
    IterationReport,
    SolveResult,
    SolverConfig,
    SolverState,
    check_termination,
    compute_report,
    solve,
)
from .uv import (
    UVFactors,
    apply_U,
    apply_Ut,
    apply_V,
    apply_Vt,
    apply_y_factor,
    build_uv,
)

__version__ = "0.1.0"

__all__ = [
    "ConeSpec",
    "ConeWorkview",
    "DenseMirror",
    "GenSpec",
    "GeneratedInstance",
    "IterationReport",
    "ParseError",
    "ProblemInstance",
    "SolveResult",
    "SolverConfig",
    "SolverState",
    "TripletMatrix",
    "UVFactors",
    "ValidationReport",
    "apply_U",
    "apply_Ut",
    "apply_V",
    "apply_Vt",
    "apply_y_factor",
    "build_uv",
    "check_termination",
    "compute_report",
    "dense_assemble",
    "dense_iterate",
    "generate",
    "generate_witnessed",
    "in_cone",
    "parse_problem",
    "parse_solution",
    "project_block",
    "project_product",
    "solve",
    "trace_csv",
    "validate",
    "write_problem",
    "write_solution",
]
