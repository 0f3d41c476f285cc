# this_file: src/pdangles/mesh/__init__.py
"""Oriented simplicial complexes, their metrics, generators and OFF input."""

from .complex import BoundaryComplex, SimplicialComplex
from .generators import (
    generate_annulus,
    generate_disk,
    generate_flat_torus,
    generate_punctured_torus,
)
from .geometry import MeshGeometry
from .homology import (
    betti_numbers,
    boundary_components,
    euler_characteristic,
    integer_rank,
    relative_betti_numbers,
)
from .loader import OffLoader, load_off, load_off_file, to_off
from .source import GeneratorKind, GeneratorSpec, MeshSource

__all__ = [
    "BoundaryComplex",
    "GeneratorKind",
    "GeneratorSpec",
    "MeshGeometry",
    "MeshSource",
    "OffLoader",
    "SimplicialComplex",
    "betti_numbers",
    "boundary_components",
    "euler_characteristic",
    "generate_annulus",
    "generate_disk",
    "generate_flat_torus",
    "generate_punctured_torus",
    "integer_rank",
    "load_off",
    "load_off_file",
    "relative_betti_numbers",
    "to_off",
]
