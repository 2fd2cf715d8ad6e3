"""Grassmann manifolds over R, C, and H as spaces of Hermitian projections.

Numerically certifies their differential geometry (minimality in the
sphere, Laplacian eigenfunctions, gradient flows of height functions,
Morse-Bott indices) and exactly computes their Poincare polynomials by
recursion, Schubert cell counting, and Morse-Bott assembly.
"""

from .algebra import (
    ContractViolationError,
    DegenerateInputError,
    Field,
    HermitianMatrix,
    InconsistencyError,
    Scalar,
    hermitian_inner,
    lemma21_basis,
    random_hermitian,
)
from .grassmann import (
    Frame,
    ProjectionPoint,
    complement,
    embed,
    frame_from_projection,
    intersection_dimension,
    involution,
    orthonormalize,
    random_point,
    real_determinant,
    span_dimension,
)
from .geometry import (
    FullFrame,
    GeodesicCurve,
    TangentVector,
    complete_frame,
    curve_velocity,
    directional_derivative,
    geodesic_point,
    laplacian_numeric,
    mean_curvature_closed_form,
    mean_curvature_numeric,
    minimality_residual,
    retraction_frame,
    sphere_slice_radius,
    tangent_basis,
)
from .morse import (
    ClassificationError,
    CriticalClass,
    FlowReport,
    HeightParam,
    IndexResult,
    TrajectoryCurve,
    UndefinedTrajectoryError,
    UnstableIndexWarning,
    class_param_name,
    classify_critical,
    critical_submanifold_shape,
    e12_criticality_residual,
    first_axis_canonical,
    flow,
    gradient_matrix,
    height,
    hessian_form,
    morse_index,
    morse_index_from_eigenvalues,
    riemannian_gradient,
    sample_critical_point,
    theorem_index_nullity,
    trajectory_gamma,
)
from .homology import (
    IntPolynomial,
    binomial_total,
    check_poincare_identity,
    morse_bott_assembly,
    poincare_recursive_f,
    poincare_recursive_g,
    schubert_oracle,
    total_betti,
)
from .cli import main

__version__ = "0.1.0"

__all__ = [
    "ContractViolationError",
    "DegenerateInputError",
    "Field",
    "HermitianMatrix",
    "InconsistencyError",
    "Scalar",
    "hermitian_inner",
    "lemma21_basis",
    "random_hermitian",
    "Frame",
    "ProjectionPoint",
    "complement",
    "embed",
    "frame_from_projection",
    "intersection_dimension",
    "involution",
    "orthonormalize",
    "random_point",
    "real_determinant",
    "span_dimension",
    "FullFrame",
    "GeodesicCurve",
    "TangentVector",
    "complete_frame",
    "curve_velocity",
    "directional_derivative",
    "geodesic_point",
    "laplacian_numeric",
    "mean_curvature_closed_form",
    "mean_curvature_numeric",
    "minimality_residual",
    "retraction_frame",
    "sphere_slice_radius",
    "tangent_basis",
    "ClassificationError",
    "CriticalClass",
    "FlowReport",
    "HeightParam",
    "IndexResult",
    "TrajectoryCurve",
    "UndefinedTrajectoryError",
    "UnstableIndexWarning",
    "class_param_name",
    "classify_critical",
    "critical_submanifold_shape",
    "e12_criticality_residual",
    "first_axis_canonical",
    "flow",
    "gradient_matrix",
    "height",
    "hessian_form",
    "morse_index",
    "morse_index_from_eigenvalues",
    "riemannian_gradient",
    "sample_critical_point",
    "theorem_index_nullity",
    "trajectory_gamma",
    "IntPolynomial",
    "binomial_total",
    "check_poincare_identity",
    "morse_bott_assembly",
    "poincare_recursive_f",
    "poincare_recursive_g",
    "schubert_oracle",
    "total_betti",
    "main",
    "__version__",
]
