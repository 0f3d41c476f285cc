# this_file: src/pdangles/cohom1/__init__.py
"""Duality angles of cohomogeneity-one complements: closed forms, shooting and exponents."""

from .angles import SWEEP_COLUMNS, compare, numeric_angle, parameter_grid, sweep, weighted_l2
from .asymptotics import (
    EXPONENT_COLUMNS,
    ExponentFit,
    asymptotic_exponent,
    closing_exponent,
    default_radii,
    expected_exponent,
    exponent_study,
)
from .closed_form import (
    AngleResult,
    closed_form_angle,
    closed_form_norms,
    closed_form_profiles,
    normalization_constants,
    one_minus_cos,
    sphere_volume,
)
from .family import Family, FamilyParams, Method, RadialStructure, Role
from .quadrature import composite_nodes, integrate
from .radial import (
    RadialSolution,
    closed_form_solution,
    ode_residual,
    profile_error,
    solve_radial,
    weighted_integral,
)

__all__ = [
    "EXPONENT_COLUMNS",
    "SWEEP_COLUMNS",
    "AngleResult",
    "ExponentFit",
    "Family",
    "FamilyParams",
    "Method",
    "RadialSolution",
    "RadialStructure",
    "Role",
    "asymptotic_exponent",
    "closed_form_angle",
    "closed_form_norms",
    "closed_form_profiles",
    "closed_form_solution",
    "closing_exponent",
    "compare",
    "composite_nodes",
    "default_radii",
    "expected_exponent",
    "exponent_study",
    "integrate",
    "normalization_constants",
    "numeric_angle",
    "ode_residual",
    "one_minus_cos",
    "parameter_grid",
    "profile_error",
    "solve_radial",
    "sphere_volume",
    "sweep",
    "weighted_integral",
    "weighted_l2",
]
