# this_file: src/pdangles/forms/__init__.py
"""Whitney forms, their inner products, traces and the discrete operators d and delta."""

from .cochain import Carrier, Cochain
from .linalg import null_space_basis, numerical_rank, range_basis
from .operators import DiscreteForms
from .traces import InnerProductStructure, TraceOperators
from .whitney import WhitneyGeometry

__all__ = [
    "Carrier",
    "Cochain",
    "DiscreteForms",
    "InnerProductStructure",
    "TraceOperators",
    "WhitneyGeometry",
    "null_space_basis",
    "numerical_rank",
    "range_basis",
]
