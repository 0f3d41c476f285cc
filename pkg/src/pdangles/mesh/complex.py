# this_file: src/pdangles/mesh/complex.py
"""Oriented simplicial complexes with signed incidence matrices and a boundary subcomplex."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Self

import numpy as np
from loguru import logger
from scipy import sparse
from scipy.sparse import csgraph

from ..errors import MeshValidationError


def permutation_parity(order: np.ndarray) -> np.ndarray:
    """Sign (+1/-1) of each row permutation in ``order``.

    Args:
        order: Integer array of shape (N, k), each row a permutation of ``range(k)``

    Returns:
        Array of shape (N,) with the parity of every row
    """
    order = np.asarray(order)
    inversions = np.zeros(order.shape[0], dtype=np.int64)
    for i, j in itertools.combinations(range(order.shape[1]), 2):
        inversions += order[:, i] > order[:, j]
    return np.where(inversions % 2 == 0, 1, -1).astype(np.int64)


def format_simplex(vertices) -> str:
    """Render a vertex tuple the way error messages name simplices."""
    return "(" + ", ".join(str(int(v)) for v in vertices) + ")"


@dataclass(frozen=True, eq=False)
class BoundaryComplex:
    """The induced boundary complex together with its index map into the parent.

    ``parent_indices[p][i]`` is the index in the parent's p-simplex list of the
    boundary p-simplex ``complex.simplices[p][i]``. Vertex labels of the boundary
    complex are a monotone relabelling of the parent's, so both lists share order.
    """

    complex: SimplicialComplex
    parent_indices: tuple[np.ndarray, ...]
    parent_vertices: np.ndarray


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """An oriented simplicial complex of top dimension ``dim``.

    Every p-simplex with p < dim is oriented by its sorted vertex tuple. Top
    simplices carry an explicit sign in ``top_signs``; rows of ``incidence[dim-1]``
    are multiplied by it. ``incidence[p]`` maps p-cochains to (p+1)-cochains.
    """

    dim: int
    simplices: tuple[np.ndarray, ...]
    top_signs: np.ndarray
    incidence: tuple[sparse.csr_matrix, ...]
    boundary_marker: tuple[np.ndarray, ...]
    boundary: BoundaryComplex | None

    @classmethod
    def from_top_simplices(
        cls,
        cells,
        n_vertices: int | None = None,
        signs=None,
    ) -> Self:
        """Build a complex from its top simplices.

        Args:
            cells: Integer array (N, dim+1); row order gives the winding of each simplex
            n_vertices: Number of vertices (defaults to the largest label plus one)
            signs: Optional extra orientation signs applied on top of the winding

        Returns:
            New SimplicialComplex, not yet validated

        Raises:
            MeshValidationError: Empty input, degenerate or duplicated simplices,
                unused vertices
        """
        cells = np.asarray(cells, dtype=np.int64)
        if cells.ndim != 2 or cells.shape[0] == 0:
            raise MeshValidationError("complex has no top simplices")
        dim = cells.shape[1] - 1
        if cells.min() < 0:
            raise MeshValidationError("negative vertex label in top simplices")

        order = np.argsort(cells, axis=1, kind="stable")
        ordered = np.take_along_axis(cells, order, axis=1)
        winding = permutation_parity(order)
        if signs is not None:
            winding = winding * np.asarray(signs, dtype=np.int64)

        degenerate = np.flatnonzero(np.any(ordered[:, 1:] == ordered[:, :-1], axis=1))
        if degenerate.size:
            raise MeshValidationError(
                [f"degenerate simplex {format_simplex(cells[i])}" for i in degenerate]
            )

        top, inverse, counts = np.unique(
            ordered, axis=0, return_inverse=True, return_counts=True
        )
        if np.any(counts > 1):
            raise MeshValidationError(
                [f"duplicate simplex {format_simplex(row)}" for row in top[counts > 1]]
            )
        top_signs = np.empty(top.shape[0], dtype=np.int64)
        top_signs[np.asarray(inverse).ravel()] = winding

        if n_vertices is None:
            n_vertices = int(top.max()) + 1
        used = np.zeros(n_vertices, dtype=bool)
        if top.max() >= n_vertices:
            raise MeshValidationError(
                f"vertex label {int(top.max())} out of range for {n_vertices} vertices"
            )
        used[top.ravel()] = True
        if not used.all():
            raise MeshValidationError(
                [f"vertex ({v}) is not used by any simplex" for v in np.flatnonzero(~used)]
            )

        simplices: list[np.ndarray] = [np.arange(n_vertices, dtype=np.int64)[:, None]]
        for p in range(1, dim):
            faces = [top[:, list(combo)] for combo in itertools.combinations(range(dim + 1), p + 1)]
            simplices.append(np.unique(np.vstack(faces), axis=0))
        if dim > 0:
            simplices.append(top)
        else:
            simplices = [top]

        lookups = [_lookup(s) for s in simplices]
        incidence = []
        for p in range(dim):
            higher = simplices[p + 1]
            rows, cols, vals = [], [], []
            row_signs = top_signs if p + 1 == dim else np.ones(higher.shape[0], dtype=np.int64)
            for i in range(p + 2):
                faces = np.delete(higher, i, axis=1)
                cols.append(_indices(lookups[p], faces))
                rows.append(np.arange(higher.shape[0]))
                vals.append(row_signs * (-1) ** i)
            incidence.append(
                sparse.csr_matrix(
                    (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                    shape=(higher.shape[0], simplices[p].shape[0]),
                    dtype=np.int64,
                )
            )

        markers = [np.zeros(s.shape[0], dtype=bool) for s in simplices]
        boundary = None
        if dim > 0:
            cofaces = np.diff(incidence[dim - 1].tocsc().indptr)
            markers[dim - 1] = cofaces == 1
            boundary_faces = simplices[dim - 1][markers[dim - 1]]
            for p in range(dim - 1):
                for combo in itertools.combinations(range(dim), p + 1):
                    markers[p][_indices(lookups[p], boundary_faces[:, list(combo)])] = True
            if boundary_faces.shape[0]:
                boundary = _induced_boundary(
                    simplices, incidence[dim - 1], markers, boundary_faces
                )

        complex_ = cls(
            dim=dim,
            simplices=tuple(simplices),
            top_signs=top_signs,
            incidence=tuple(incidence),
            boundary_marker=tuple(markers),
            boundary=boundary,
        )
        complex_.__dict__["_lookups"] = lookups
        logger.debug(f"Built {dim}-complex with simplex counts {complex_.counts}")
        return complex_

    @property
    def counts(self) -> tuple[int, ...]:
        """Number of p-simplices for p = 0..dim."""
        return tuple(int(s.shape[0]) for s in self.simplices)

    @property
    def is_closed(self) -> bool:
        """True when the boundary is empty."""
        return self.boundary is None

    def count(self, p: int) -> int:
        if 0 <= p <= self.dim:
            return int(self.simplices[p].shape[0])
        return 0

    def index_of(self, p: int, vertices) -> int:
        """Index of the p-simplex with the given vertex set (any order)."""
        key = tuple(sorted(int(v) for v in vertices))
        try:
            return self._lookups[p][key]
        except KeyError:
            raise MeshValidationError(f"no {p}-simplex {format_simplex(key)}") from None

    def interior_indices(self, p: int) -> np.ndarray:
        return np.flatnonzero(~self.boundary_marker[p])

    def boundary_indices(self, p: int) -> np.ndarray:
        return np.flatnonzero(self.boundary_marker[p])

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * n for p, n in enumerate(self.counts))

    @cached_property
    def _lookups(self) -> list[dict[tuple[int, ...], int]]:
        return [_lookup(s) for s in self.simplices]

    @cached_property
    def local_faces(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """Local vertex positions of the p-faces of a top simplex, in sorted order."""
        return tuple(
            tuple(itertools.combinations(range(self.dim + 1), p + 1)) for p in range(self.dim + 1)
        )

    def top_face_indices(self, p: int) -> np.ndarray:
        """Global index of every local p-face of every top simplex, shape (N_top, C(dim+1, p+1))."""
        cache = self.__dict__.setdefault("_top_face_cache", {})
        if p not in cache:
            top = self.simplices[self.dim]
            cache[p] = np.column_stack(
                [_indices(self._lookups[p], top[:, list(face)]) for face in self.local_faces[p]]
            )
        return cache[p]

    def vertex_components(self) -> int:
        """Number of connected components of the 1-skeleton."""
        n = self.count(0)
        if self.dim == 0:
            return n
        edges = self.simplices[1]
        graph = sparse.coo_matrix(
            (np.ones(edges.shape[0]), (edges[:, 0], edges[:, 1])), shape=(n, n)
        )
        components, _ = csgraph.connected_components(graph, directed=False)
        return int(components)

    def validate(self) -> list[str]:
        """Check the oriented-manifold-with-boundary invariants.

        Returns:
            List of problems, each naming the offending simplex; empty when valid
        """
        problems: list[str] = []
        n = self.dim
        for p in range(n - 1):
            product = (self.incidence[p + 1] @ self.incidence[p]).tocoo()
            product.eliminate_zeros()
            if product.nnz:
                problems.append(f"incidence[{p + 1}] @ incidence[{p}] is nonzero")
        if n == 0:
            return problems

        coboundary = self.incidence[n - 1].tocsc()
        cofaces = np.diff(coboundary.indptr)
        faces = self.simplices[n - 1]
        for j in np.flatnonzero(cofaces > 2):
            problems.append(
                f"non-manifold face {format_simplex(faces[j])} bounds {cofaces[j]} top simplices"
            )
        sums = np.asarray(coboundary.sum(axis=0)).ravel()
        for j in np.flatnonzero((cofaces == 2) & (sums != 0)):
            problems.append(f"inconsistent orientation across face {format_simplex(faces[j])}")

        problems.extend(self._vertex_link_problems(coboundary, cofaces))

        if self.boundary is not None and n >= 2:
            sub = self.boundary.complex
            sub_cofaces = np.diff(sub.incidence[sub.dim - 1].tocsc().indptr)
            verts = self.boundary.parent_vertices
            for j in np.flatnonzero(sub_cofaces != 2):
                ridge = verts[sub.simplices[sub.dim - 1][j]]
                problems.append(
                    f"boundary is not closed at {format_simplex(ridge)}: "
                    f"{sub_cofaces[j]} boundary faces meet there"
                )
        return problems

    def check(self) -> Self:
        """Raise MeshValidationError unless ``validate`` finds nothing."""
        problems = self.validate()
        if problems:
            raise MeshValidationError(problems)
        return self

    def _vertex_link_problems(self, coboundary: sparse.csc_matrix, cofaces: np.ndarray) -> list[str]:
        # The top simplices around each vertex must be connected through shared faces.
        n = self.dim
        top = self.simplices[n]
        nodes = top.shape[0] * (n + 1)
        pairs_a, pairs_b = [], []
        for j in np.flatnonzero(cofaces == 2):
            t1, t2 = coboundary.indices[coboundary.indptr[j] : coboundary.indptr[j + 1]]
            for v in self.simplices[n - 1][j]:
                a = t1 * (n + 1) + int(np.flatnonzero(top[t1] == v)[0])
                b = t2 * (n + 1) + int(np.flatnonzero(top[t2] == v)[0])
                pairs_a.append(a)
                pairs_b.append(b)
        graph = sparse.coo_matrix(
            (np.ones(len(pairs_a)), (pairs_a, pairs_b)), shape=(nodes, nodes)
        )
        _, labels = csgraph.connected_components(graph, directed=False)
        owner = top.ravel()
        problems = []
        for v in range(self.count(0)):
            if np.unique(labels[owner == v]).size > 1:
                problems.append(f"vertex ({v}) is a non-manifold point")
        return problems


def _lookup(rows: np.ndarray) -> dict[tuple[int, ...], int]:
    return {tuple(row): i for i, row in enumerate(rows.tolist())}


def _indices(lookup: dict[tuple[int, ...], int], rows: np.ndarray) -> np.ndarray:
    return np.fromiter((lookup[tuple(r)] for r in rows.tolist()), dtype=np.int64, count=len(rows))


def _induced_boundary(
    simplices: list[np.ndarray],
    top_incidence: sparse.csr_matrix,
    markers: list[np.ndarray],
    boundary_faces: np.ndarray,
) -> BoundaryComplex:
    # The Stokes orientation of a boundary face is its coefficient in the
    # boundary of the unique top simplex containing it.
    coboundary = top_incidence.tocsc()
    columns = np.flatnonzero(markers[len(simplices) - 2])
    face_signs = coboundary.data[coboundary.indptr[columns]]

    parent_vertices = np.flatnonzero(markers[0])
    local = np.searchsorted(parent_vertices, boundary_faces)
    sub = SimplicialComplex.from_top_simplices(
        local, n_vertices=parent_vertices.size, signs=face_signs
    )
    parent_indices = tuple(np.flatnonzero(markers[p]) for p in range(len(simplices) - 1))
    for p, idx in enumerate(parent_indices):
        if not np.array_equal(parent_vertices[sub.simplices[p]], simplices[p][idx]):
            raise MeshValidationError(f"boundary {p}-simplices do not match the parent complex")
    return BoundaryComplex(complex=sub, parent_indices=parent_indices, parent_vertices=parent_vertices)
