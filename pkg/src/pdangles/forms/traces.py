# this_file: src/pdangles/forms/traces.py
"""Mass matrices and the trace operators that connect the interior to the boundary."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy import sparse

from ..errors import SolverError
from ..mesh.complex import SimplicialComplex
from .linalg import cholesky_lower, cholesky_solve
from .whitney import WhitneyGeometry


@dataclass(frozen=True, eq=False)
class InnerProductStructure:
    """Dense SPD mass matrices for every degree, with their Cholesky factors."""

    mass: tuple[np.ndarray, ...]
    factors: tuple[np.ndarray, ...]
    boundary_mass: tuple[np.ndarray, ...]
    boundary_factors: tuple[np.ndarray, ...]

    @classmethod
    def assemble(
        cls, interior: WhitneyGeometry, boundary: WhitneyGeometry | None
    ) -> InnerProductStructure:
        mass = tuple(_checked_mass(interior, p) for p in range(interior.dim + 1))
        boundary_mass: tuple[np.ndarray, ...] = ()
        if boundary is not None:
            boundary_mass = tuple(_checked_mass(boundary, p) for p in range(boundary.dim + 1))
        return cls(
            mass=mass,
            factors=tuple(cholesky_lower(m, what=f"{p}-form mass") for p, m in enumerate(mass)),
            boundary_mass=boundary_mass,
            boundary_factors=tuple(
                cholesky_lower(m, what=f"boundary {p}-form mass") for p, m in enumerate(boundary_mass)
            ),
        )


def _checked_mass(geometry: WhitneyGeometry, p: int) -> np.ndarray:
    mass = geometry.mass_matrix(p).toarray()
    asymmetry = np.max(np.abs(mass - mass.T), initial=0.0)
    if asymmetry > 1e-14 * max(np.max(np.abs(mass), initial=0.0), 1e-300):
        raise SolverError(f"{p}-form mass matrix is not symmetric ({asymmetry:.3e})", module="forms")
    return 0.5 * (mass + mass.T)


@dataclass(frozen=True, eq=False)
class TraceOperators:
    """Tangential and normal traces for every degree.

    ``tangential[p]`` maps interior p-cochains to boundary p-cochains (restriction,
    with the Stokes signs in degree dim-1). ``normal[p]`` maps interior p-cochains to
    the Riesz representative of their normal trace, a boundary (p-1)-cochain.
    Closed complexes get operators with zero rows.
    """

    tangential: tuple[np.ndarray, ...]
    normal: tuple[np.ndarray, ...]
    boundary_signs: np.ndarray

    @classmethod
    def assemble(
        cls, complex_: SimplicialComplex, inner: InnerProductStructure
    ) -> TraceOperators:
        n = complex_.dim
        boundary = complex_.boundary
        if boundary is None:
            empty = tuple(np.zeros((0, complex_.count(p))) for p in range(n + 1))
            return cls(tangential=empty, normal=empty, boundary_signs=np.zeros(0))

        # Stokes orientation of each boundary face relative to its sorted order.
        coboundary = complex_.incidence[n - 1].tocsc()
        columns = boundary.parent_indices[n - 1]
        signs = coboundary.data[coboundary.indptr[columns]].astype(float)

        tangential = []
        for p in range(n + 1):
            if p == n:
                tangential.append(np.zeros((0, complex_.count(p))))
                continue
            index = boundary.parent_indices[p]
            values = signs if p == n - 1 else np.ones(index.size)
            restriction = sparse.coo_matrix(
                (values, (np.arange(index.size), index)), shape=(index.size, complex_.count(p))
            )
            tangential.append(restriction.toarray())

        normal = [np.zeros((0, complex_.count(0)))]
        for p in range(1, n + 1):
            normal.append(_normal_trace_matrix(complex_, inner, signs, p))
        logger.debug(f"Assembled traces for {boundary.complex.counts} boundary simplices")
        return cls(tangential=tuple(tangential), normal=tuple(normal), boundary_signs=signs)


def _normal_trace_matrix(
    complex_: SimplicialComplex, inner: InnerProductStructure, signs: np.ndarray, p: int
) -> np.ndarray:
    # n(beta) = (D^T M beta)_B - M_BI delta_0 beta_I, then represented against the
    # boundary mass of (p-1)-forms.
    n = complex_.dim
    coboundary = complex_.incidence[p - 1].toarray().astype(float)
    weak = coboundary.T @ inner.mass[p]
    inside = complex_.interior_indices(p - 1)
    on_boundary = complex_.boundary_indices(p - 1)
    mass = inner.mass[p - 1]
    if inside.size:
        codiff = cholesky_solve(
            cholesky_lower(mass[np.ix_(inside, inside)], what="interior mass"), weak[inside]
        )
        flux = weak[on_boundary] - mass[np.ix_(on_boundary, inside)] @ codiff
    else:
        flux = weak[on_boundary]
    if p - 1 == n - 1:
        flux = signs[:, None] * flux
    return cholesky_solve(inner.boundary_factors[p - 1], flux)
