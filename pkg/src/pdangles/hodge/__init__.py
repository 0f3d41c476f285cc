# this_file: src/pdangles/hodge/__init__.py
"""Harmonic fields, the Hodge-Morrey-Friedrichs decomposition and Poincare duality angles."""

from .decomposition import (
    FiveTermParts,
    HodgeDecomposition,
    InteriorBoundarySplit,
    MorreyParts,
)
from .subspaces import (
    PrincipalAngleSet,
    SubspaceBasis,
    SubspaceRole,
    principal_angles,
    subspace_distance,
)

__all__ = [
    "FiveTermParts",
    "HodgeDecomposition",
    "InteriorBoundarySplit",
    "MorreyParts",
    "PrincipalAngleSet",
    "SubspaceBasis",
    "SubspaceRole",
    "principal_angles",
    "subspace_distance",
]
