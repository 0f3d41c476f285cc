# this_file: src/pdangles/__init__.py
"""pdangles - Poincare duality angles from closed forms, radial ODEs and discrete Hodge theory."""

try:
    from ._version import __version__
except ImportError:
    __version__ = "0.0.0+unknown"

from .cohom1 import AngleResult, Family, FamilyParams, closed_form_angle, numeric_angle
from .config import DEFAULT_TOLERANCES, Tolerances
from .dtn import DtNSolver
from .errors import PdAnglesError
from .forms import Carrier, Cochain, DiscreteForms
from .hodge import HodgeDecomposition
from .mesh import GeneratorSpec, MeshSource, SimplicialComplex

__all__ = [
    "DEFAULT_TOLERANCES",
    # Cohomogeneity one
    "AngleResult",
    # Discrete forms
    "Carrier",
    "Cochain",
    "DiscreteForms",
    # Boundary operators
    "DtNSolver",
    "Family",
    "FamilyParams",
    # Meshes
    "GeneratorSpec",
    "HodgeDecomposition",
    "MeshSource",
    "PdAnglesError",
    "SimplicialComplex",
    "Tolerances",
    "__version__",
    "closed_form_angle",
    "numeric_angle",
]
