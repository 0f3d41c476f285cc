# this_file: src/pdangles/mesh/generators.py
"""Deterministic triangulations of the annulus, disk, flat torus and punctured torus.

All generators return a validated ``(SimplicialComplex, MeshGeometry)`` pair whose
top simplices are wound counter-clockwise in the parameter plane.
"""

from __future__ import annotations

import math

import numpy as np
from loguru import logger

from ..errors import MeshValidationError
from .complex import SimplicialComplex
from .geometry import MeshGeometry
from .homology import boundary_components


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise MeshValidationError(message)


def generate_annulus(
    n_radial: int, n_angular: int, r_in: float, r_out: float
) -> tuple[SimplicialComplex, MeshGeometry]:
    """Annulus ``r_in <= |x| <= r_out`` on a structured polar grid.

    Args:
        n_radial: Number of radial layers (at least 1)
        n_angular: Number of angular divisions (at least 3)
        r_in: Inner radius, positive
        r_out: Outer radius, larger than ``r_in``
    """
    _require(n_radial >= 1, f"annulus needs n_radial >= 1, got {n_radial}")
    _require(n_angular >= 3, f"annulus needs n_angular >= 3, got {n_angular}")
    _require(0 < r_in < r_out, f"annulus needs 0 < r_in < r_out, got {r_in}, {r_out}")

    radii = r_in + (r_out - r_in) * np.arange(n_radial + 1) / n_radial
    angles = 2 * math.pi * np.arange(n_angular) / n_angular
    coords = np.column_stack(
        [np.repeat(radii, n_angular) * np.tile(np.cos(angles), n_radial + 1),
         np.repeat(radii, n_angular) * np.tile(np.sin(angles), n_radial + 1)]
    )

    def vid(i: int, j: int) -> int:
        return i * n_angular + j % n_angular

    cells = []
    for i in range(n_radial):
        for j in range(n_angular):
            cells.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            cells.append((vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)))
    return _finish("annulus", cells, MeshGeometry(vertex_coords=coords))


def generate_disk(
    n_rings: int, n_sectors: int, radius: float = 1.0
) -> tuple[SimplicialComplex, MeshGeometry]:
    """Unit-style disk: a centre fan plus rings of ``n_sectors * i`` vertices.

    Args:
        n_rings: Number of rings around the centre (at least 1)
        n_sectors: Vertices on the first ring (at least 3)
        radius: Disk radius
    """
    _require(n_rings >= 1, f"disk needs n_rings >= 1, got {n_rings}")
    _require(n_sectors >= 3, f"disk needs n_sectors >= 3, got {n_sectors}")
    _require(radius > 0, f"disk needs a positive radius, got {radius}")

    coords = [(0.0, 0.0)]
    ring_start = [0]
    for i in range(1, n_rings + 1):
        ring_start.append(len(coords))
        count = n_sectors * i
        for k in range(count):
            angle = 2 * math.pi * k / count
            coords.append((radius * i / n_rings * math.cos(angle), radius * i / n_rings * math.sin(angle)))

    cells = [(0, 1 + k, 1 + (k + 1) % n_sectors) for k in range(n_sectors)]
    for i in range(1, n_rings):
        inner_count, outer_count = n_sectors * i, n_sectors * (i + 1)
        inner, outer = ring_start[i], ring_start[i + 1]
        ip = op = 0
        while ip < inner_count or op < outer_count:
            next_inner = (ip + 1) / inner_count
            next_outer = (op + 1) / outer_count
            if op == outer_count or (ip < inner_count and next_inner < next_outer):
                cells.append(
                    (inner + ip % inner_count, outer + op % outer_count, inner + (ip + 1) % inner_count)
                )
                ip += 1
            else:
                cells.append(
                    (inner + ip % inner_count, outer + op % outer_count, outer + (op + 1) % outer_count)
                )
                op += 1
    return _finish("disk", cells, MeshGeometry(vertex_coords=np.asarray(coords)))


def _torus_cells(n: int, skip=lambda i, j: False) -> list[tuple[int, int, int]]:
    def vid(i: int, j: int) -> int:
        return (i % n) * n + (j % n)

    cells = []
    for i in range(n):
        for j in range(n):
            if skip(i, j):
                continue
            cells.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            cells.append((vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)))
    return cells


def _torus_lengths(complex_: SimplicialComplex, labels: np.ndarray, n: int) -> np.ndarray:
    # Axis edges have length 1/n, grid diagonals sqrt(2)/n.
    edges = labels[complex_.simplices[1]]
    di = (edges[:, 1] // n - edges[:, 0] // n) % n
    dj = (edges[:, 1] % n - edges[:, 0] % n) % n
    diagonal = (di != 0) & (dj != 0)
    return np.where(diagonal, math.sqrt(2.0), 1.0) / n


def generate_flat_torus(divisions: int) -> tuple[SimplicialComplex, MeshGeometry]:
    """Flat unit torus on an ``divisions x divisions`` grid, metric given by edge lengths."""
    _require(divisions >= 3, f"flat torus needs divisions >= 3, got {divisions}")
    complex_ = SimplicialComplex.from_top_simplices(
        _torus_cells(divisions), n_vertices=divisions * divisions
    )
    labels = np.arange(divisions * divisions)
    geometry = MeshGeometry(edge_lengths=_torus_lengths(complex_, labels, divisions))
    return _checked("flat torus", complex_, geometry)


def generate_punctured_torus(divisions: int, hole: int) -> tuple[SimplicialComplex, MeshGeometry]:
    """Flat torus with a ``hole x hole`` block of grid squares removed near the centre.

    Raises:
        MeshValidationError: When the hole leaves no manifold collar
            (``hole > divisions - 2``) or the result has more than one boundary circle
    """
    _require(divisions >= 3, f"punctured torus needs divisions >= 3, got {divisions}")
    _require(1 <= hole <= divisions - 2, f"hole must satisfy 1 <= hole <= {divisions - 2}, got {hole}")
    start = (divisions - hole) // 2

    def in_hole(i: int, j: int) -> bool:
        return start <= i < start + hole and start <= j < start + hole

    cells = np.asarray(_torus_cells(divisions, in_hole))
    labels = np.unique(cells)
    complex_ = SimplicialComplex.from_top_simplices(
        np.searchsorted(labels, cells), n_vertices=labels.size
    )
    geometry = MeshGeometry(edge_lengths=_torus_lengths(complex_, labels, divisions))
    complex_, geometry = _checked("punctured torus", complex_, geometry)
    components = complex_.vertex_components()
    circles = boundary_components(complex_)
    _require(components == 1, f"punctured torus is disconnected ({components} components)")
    _require(circles == 1, f"punctured torus has {circles} boundary components, expected 1")
    return complex_, geometry


def _finish(name: str, cells, geometry: MeshGeometry) -> tuple[SimplicialComplex, MeshGeometry]:
    complex_ = SimplicialComplex.from_top_simplices(cells)
    return _checked(name, complex_, geometry)


def _checked(
    name: str, complex_: SimplicialComplex, geometry: MeshGeometry
) -> tuple[SimplicialComplex, MeshGeometry]:
    complex_.check()
    geometry.check(complex_)
    logger.info(f"Generated {name} with simplex counts {complex_.counts}")
    return complex_, geometry
