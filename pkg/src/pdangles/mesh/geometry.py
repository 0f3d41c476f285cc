# this_file: src/pdangles/mesh/geometry.py
"""Piecewise-flat metrics on a simplicial complex."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import MeshValidationError
from .complex import BoundaryComplex, SimplicialComplex, format_simplex


@dataclass(frozen=True, eq=False)
class MeshGeometry:
    """Vertex coordinates or explicit edge lengths for a complex.

    Explicit ``edge_lengths`` win over coordinates; the flat torus has no
    embedding and only carries lengths.
    """

    vertex_coords: np.ndarray | None = None
    edge_lengths: np.ndarray | None = None

    def lengths(self, complex_: SimplicialComplex) -> np.ndarray:
        """Length of every edge of ``complex_``, in edge order."""
        if self.edge_lengths is not None:
            lengths = np.asarray(self.edge_lengths, dtype=float)
            if lengths.shape != (complex_.count(1),):
                raise MeshValidationError(
                    f"{lengths.size} edge lengths given for {complex_.count(1)} edges"
                )
            return lengths
        if self.vertex_coords is None:
            raise MeshValidationError("geometry has neither coordinates nor edge lengths")
        coords = np.asarray(self.vertex_coords, dtype=float)
        edges = complex_.simplices[1]
        return np.linalg.norm(coords[edges[:, 1]] - coords[edges[:, 0]], axis=1)

    def restrict(self, complex_: SimplicialComplex) -> MeshGeometry:
        """Geometry induced on the boundary complex of ``complex_``."""
        boundary: BoundaryComplex | None = complex_.boundary
        if boundary is None:
            raise MeshValidationError("complex has no boundary")
        coords = None
        if self.vertex_coords is not None:
            coords = np.asarray(self.vertex_coords, dtype=float)[boundary.parent_vertices]
        lengths = None
        if boundary.complex.dim >= 1:
            lengths = self.lengths(complex_)[boundary.parent_indices[1]]
        return MeshGeometry(vertex_coords=coords, edge_lengths=lengths)

    def validate(self, complex_: SimplicialComplex) -> list[str]:
        """Problems with the metric: zero-length edges, flat or inverted simplices."""
        problems = []
        lengths = self.lengths(complex_)
        for e in np.flatnonzero(~(lengths > 0)):
            problems.append(f"edge {format_simplex(complex_.simplices[1][e])} has length {lengths[e]}")
        if problems:
            return problems
        grams = metric_grams(complex_, lengths)
        dets = np.linalg.det(grams)
        scale = np.max(lengths) ** (2 * complex_.dim)
        for t in np.flatnonzero(~(dets > 1e-14 * scale)):
            problems.append(
                f"degenerate simplex {format_simplex(complex_.simplices[complex_.dim][t])}"
            )
        return problems

    def check(self, complex_: SimplicialComplex) -> MeshGeometry:
        problems = self.validate(complex_)
        if problems:
            raise MeshValidationError(problems)
        return self


def squared_length_matrices(complex_: SimplicialComplex, lengths: np.ndarray) -> np.ndarray:
    """Squared edge lengths between local vertices, shape (N_top, dim+1, dim+1)."""
    n = complex_.dim
    edge_index = complex_.top_face_indices(1)
    out = np.zeros((complex_.count(n), n + 1, n + 1))
    for column, (a, b) in enumerate(itertools.combinations(range(n + 1), 2)):
        sq = lengths[edge_index[:, column]] ** 2
        out[:, a, b] = sq
        out[:, b, a] = sq
    return out


def metric_grams(complex_: SimplicialComplex, lengths: np.ndarray) -> np.ndarray:
    """Gram matrices of the edge vectors from local vertex 0, shape (N_top, dim, dim)."""
    sq = squared_length_matrices(complex_, lengths)
    n = complex_.dim
    g = np.empty((sq.shape[0], n, n))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            g[:, i - 1, j - 1] = 0.5 * (sq[:, 0, i] + sq[:, 0, j] - sq[:, i, j])
    return g


def simplex_volumes(grams: np.ndarray) -> np.ndarray:
    """Volume of each top simplex from its metric Gram matrix."""
    n = grams.shape[-1]
    return np.sqrt(np.linalg.det(grams)) / math.factorial(n)
