"""Curvature and classification engine for 3-dimensional almost contact B-metric manifolds
built over 2-dimensional Norden surfaces (cone and S^1-solvable extension)."""

from .acb import AcbManifold, check_acb_axioms, cone_of, s1_extension_of
from .classify import (
    ClassDecomposition,
    LeeForms,
    PhiBasis,
    decompose_f,
    f_tensor_at,
    lee_forms_at,
    nabla_phi_square_norm_at,
    phi_basis_at,
)
from .curvature import (
    CurvatureTable,
    Tolerances,
    VerificationReport,
    curvature_table_at,
    pi_tensors_at,
    verify_cone_theorems,
    verify_s1_theorems,
)
from .expr import ScalarFieldExpr, eval_expr, parse_expr, to_source
from .kernels import BACKEND_NAME
from .surface import (
    NordenSurface,
    gaussian_curvature_at,
    make_conformal_surface,
    make_flat_surface,
    nabla_J_square_norm_at,
)
from .tensor import MetricChart, TensorComponents, christoffel_at, cov_deriv_oneform_at, riemann_at

__version__ = "0.1.0"

__all__ = [
    "AcbManifold",
    "BACKEND_NAME",
    "ClassDecomposition",
    "CurvatureTable",
    "LeeForms",
    "MetricChart",
    "NordenSurface",
    "PhiBasis",
    "ScalarFieldExpr",
    "TensorComponents",
    "Tolerances",
    "VerificationReport",
    "check_acb_axioms",
    "christoffel_at",
    "cone_of",
    "cov_deriv_oneform_at",
    "curvature_table_at",
    "decompose_f",
    "eval_expr",
    "f_tensor_at",
    "gaussian_curvature_at",
    "lee_forms_at",
    "make_conformal_surface",
    "make_flat_surface",
    "nabla_J_square_norm_at",
    "nabla_phi_square_norm_at",
    "parse_expr",
    "phi_basis_at",
    "pi_tensors_at",
    "riemann_at",
    "s1_extension_of",
    "to_source",
    "verify_cone_theorems",
    "verify_s1_theorems",
]
