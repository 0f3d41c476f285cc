# this_file: src/pdangles/dtn/__init__.py
"""Dirichlet-to-Neumann operators, the Hilbert transform and cup-product reconstruction."""

from .cup import (
    CupProductResult,
    cup_product_reconstruct,
    mixed_primitives_residual,
    off_boundary_residuals,
    well_definedness_residual,
)
from .hilbert import (
    HilbertTransform,
    TSquaredSpectrum,
    exact_coexact_residual,
    g_image,
    g_image_report,
    g_operator,
    g_sign,
    g_target,
    g_test_data,
    hilbert_transform,
    minimum_norm_transform,
    normal_transform,
    preimage_independence_residual,
    smooth_boundary_modes,
    smooth_exact_fields,
    square_sign,
    t_projection_dirichlet_residual,
    t_projection_reference_residual,
    t_projection_residual,
    t_squared,
    tangential_transform,
)
from .operator import BvpDiagnostics, DtNOperator, DtNSolver, KernelDecomposition
from .report import dtn_report

__all__ = [
    "BvpDiagnostics",
    "CupProductResult",
    "DtNOperator",
    "DtNSolver",
    "HilbertTransform",
    "KernelDecomposition",
    "TSquaredSpectrum",
    "cup_product_reconstruct",
    "dtn_report",
    "exact_coexact_residual",
    "g_image",
    "g_image_report",
    "g_operator",
    "g_sign",
    "g_target",
    "g_test_data",
    "hilbert_transform",
    "minimum_norm_transform",
    "mixed_primitives_residual",
    "normal_transform",
    "off_boundary_residuals",
    "preimage_independence_residual",
    "smooth_boundary_modes",
    "smooth_exact_fields",
    "square_sign",
    "t_projection_dirichlet_residual",
    "t_projection_reference_residual",
    "t_projection_residual",
    "t_squared",
    "tangential_transform",
    "well_definedness_residual",
]
