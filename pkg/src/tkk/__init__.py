"""Numerical toolkit for Jordan triple systems and their TKK Lie algebras."""

__version__ = "0.1.0"

from .algebra import (
    TKKAlgebra,
    TKKElement,
    V0Element,
    box,
    bracket,
    build_tkk,
    condition_a_residual,
    condition_c_singularity,
    jacobi_residual,
    natural,
    structural_checks,
    theta,
    tkk_norm,
    v0_norm,
)
from .functor import (
    GRADED,
    NEGATIVELY_GRADED,
    GradedMap,
    InconsistencyError,
    TripleMap,
    conjugate_variant_check,
    f_morphism,
    f_object,
    functor_laws,
    isometry_residual,
    recover_triple_map,
    transport_report,
    verify_graded_iso,
)
from .jordan import CartanI, CartanII, CartanIII, Spin, Sum, TripleSpace, make_space
from .numeric import DEFAULT_TOL, RealLinearOp, Tolerance
from .order import (
    HasseDiagram,
    PosetError,
    build_poset,
    extend_order_iso,
    is_lie_tripotent,
    is_strict,
    lie_leq,
    lie_orthogonal,
    negatively_graded_extend,
)
from .report import Check, Report
from .suites import SUITES, run_suites
