"""Loop space homology of highly connected Poincare duality complexes over Z/p.

The package computes the mod-p loop homology of a torsion Poincare complex
as an explicit tensor-algebra quotient, certifies the answer with a formal
spectral-sequence replay, produces the loop space decomposition, and decides
loop-space homotopy equivalence from rational rank and Bockstein data.
"""

from .algebra import FpMatrix, TruncatedSeries, matrix_rank, series_inv, series_mul
from .complexes import (
    GeneralComplexSpec,
    ManifoldSpec,
    MooreSummand,
    PDComplexSpec,
    SphereSummand,
    StructuralError,
    ValidationReport,
    WedgeSummands,
    skeleton_splitting,
    to_general,
    validate_integral,
    validate_pd,
)
from .decompose import (
    ClassInvariant,
    Decomposition,
    IntegralDecomposition,
    IntegralInvariant,
    LoopSphere,
    LoopWedge,
    MooreCell,
    QuotientPlan,
    SphereCell,
    SphereFiber,
    Verdict,
    classify,
    classify_integral,
    decompose,
    decomposition_series_check,
    factor_series,
    fiber_series,
    induced_local_spec,
    integral_decompose,
    quotient_plan,
)
from .quotient import (
    QuotientAlgebra,
    bockstein_descends,
    bockstein_image_dims,
    closed_form_dims,
    ladj_membership,
    ladj_property_check,
    quotient_algebra_for,
    quotient_dims,
    series_table,
    tensor_dims,
)
from .spectral import AcyclicityReport, BigradedPage, SpectralReplay, build_pages, verify_acyclic
from .tensor import (
    BocksteinTable,
    FreeGradedAlgebra,
    TensorElement,
    bockstein_apply,
    bockstein_chi_check,
    bockstein_table_for_pd,
    build_chi_general,
    build_chi_pd,
    lie_bracket,
    loop_algebra_for_general,
    loop_algebra_for_pd,
    substitute_generators,
)

__all__ = [
    "AcyclicityReport",
    "BigradedPage",
    "BocksteinTable",
    "ClassInvariant",
    "Decomposition",
    "FpMatrix",
    "FreeGradedAlgebra",
    "GeneralComplexSpec",
    "IntegralDecomposition",
    "IntegralInvariant",
    "LoopSphere",
    "LoopWedge",
    "ManifoldSpec",
    "MooreCell",
    "MooreSummand",
    "PDComplexSpec",
    "QuotientAlgebra",
    "QuotientPlan",
    "SpectralReplay",
    "SphereCell",
    "SphereFiber",
    "SphereSummand",
    "StructuralError",
    "TensorElement",
    "TruncatedSeries",
    "ValidationReport",
    "Verdict",
    "WedgeSummands",
    "bockstein_apply",
    "bockstein_chi_check",
    "bockstein_descends",
    "bockstein_image_dims",
    "bockstein_table_for_pd",
    "build_chi_general",
    "build_chi_pd",
    "build_pages",
    "classify",
    "classify_integral",
    "closed_form_dims",
    "decompose",
    "decomposition_series_check",
    "factor_series",
    "fiber_series",
    "induced_local_spec",
    "integral_decompose",
    "ladj_membership",
    "ladj_property_check",
    "lie_bracket",
    "loop_algebra_for_general",
    "loop_algebra_for_pd",
    "matrix_rank",
    "quotient_algebra_for",
    "quotient_dims",
    "quotient_plan",
    "series_inv",
    "series_mul",
    "series_table",
    "skeleton_splitting",
    "substitute_generators",
    "tensor_dims",
    "to_general",
    "validate_integral",
    "validate_pd",
    "verify_acyclic",
]
