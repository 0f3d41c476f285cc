# this_file: src/pdangles/forms/linalg.py
"""Rank decisions and orthonormal bases from singular value decompositions."""

from __future__ import annotations

import numpy as np
from scipy import linalg

from ..config import DEFAULT_TOLERANCES, Tolerances
from ..errors import SolverError, SpectralGapError


def numerical_rank(
    singular_values: np.ndarray,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    *,
    what: str = "",
    module: str = "hodge",
    rtol: float | None = None,
) -> int:
    """Count singular values above ``rtol * sigma_max`` (``null_rtol`` by default).

    Raises:
        SpectralGapError: When the last kept and first discarded values are within
            ``gap_ratio`` of each other
    """
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0 or s[0] <= 0:
        return 0
    cutoff = tolerances.null_rtol if rtol is None else rtol
    rank = int(np.count_nonzero(s > cutoff * s[0]))
    if 0 < rank < s.size and s[rank] > 0 and s[rank - 1] / s[rank] < tolerances.gap_ratio:
        raise SpectralGapError(float(s[rank - 1]), float(s[rank]), module=module, what=what)
    return rank


def null_space_basis(
    matrix: np.ndarray,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    *,
    what: str = "",
    module: str = "hodge",
) -> np.ndarray:
    """Orthonormal columns spanning the numerical null space of ``matrix``."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    columns = matrix.shape[1]
    if matrix.shape[0] == 0:
        return np.eye(columns)
    _, s, vt = linalg.svd(matrix, full_matrices=True)
    rank = numerical_rank(s, tolerances, what=what, module=module)
    return vt[rank:].T.copy()


def range_basis(
    matrix: np.ndarray,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    *,
    what: str = "",
    module: str = "hodge",
) -> np.ndarray:
    """Orthonormal columns spanning the numerical range of ``matrix``."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or 0 in matrix.shape:
        return np.zeros((matrix.shape[0] if matrix.ndim == 2 else 0, 0))
    u, s, _ = linalg.svd(matrix, full_matrices=False)
    rank = numerical_rank(s, tolerances, what=what, module=module)
    return u[:, :rank].copy()


def cholesky_lower(matrix: np.ndarray, *, what: str = "mass matrix") -> np.ndarray:
    """Lower Cholesky factor, raising SolverError for non-SPD input."""
    if matrix.shape[0] == 0:
        return np.zeros((0, 0))
    try:
        return linalg.cholesky(matrix, lower=True)
    except linalg.LinAlgError as exc:
        raise SolverError(f"{what} is not positive definite: {exc}", module="forms") from None


def solve_lower(factor: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """``L^-1 rhs`` for a lower-triangular ``L``."""
    if factor.shape[0] == 0:
        return np.zeros_like(rhs, dtype=float)
    return linalg.solve_triangular(factor, rhs, lower=True)


def solve_lower_transpose(factor: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """``L^-T rhs`` for a lower-triangular ``L``."""
    if factor.shape[0] == 0:
        return np.zeros_like(rhs, dtype=float)
    return linalg.solve_triangular(factor, rhs, lower=True, trans="T")


def cholesky_solve(factor: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """``(L L^T)^-1 rhs``."""
    return solve_lower_transpose(factor, solve_lower(factor, rhs))


def pseudo_inverse(
    matrix: np.ndarray,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    *,
    what: str = "",
    module: str = "dtn",
) -> np.ndarray:
    """Moore-Penrose pseudo-inverse with cutoff ``pinv_rtol`` and a spectral-gap check."""
    matrix = np.asarray(matrix, dtype=float)
    if 0 in matrix.shape:
        return np.zeros(matrix.shape[::-1])
    u, s, vt = linalg.svd(matrix, full_matrices=False)
    rank = numerical_rank(s, tolerances, what=what, module=module, rtol=tolerances.pinv_rtol)
    return (vt[:rank].T / s[:rank]) @ u[:, :rank].T
