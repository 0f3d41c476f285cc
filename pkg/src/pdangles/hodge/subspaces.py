# this_file: src/pdangles/hodge/subspaces.py
"""Mass-orthonormal subspace bases and the principal angles between them."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from loguru import logger
from scipy import linalg

from ..errors import ParameterError
from ..forms.cochain import Carrier, Cochain


class SubspaceRole(Enum):
    """The nine subspaces of the Hodge-Morrey-Friedrichs and interior/boundary splits, plus H^p itself."""

    HARMONIC_NEUMANN = "H_N"
    HARMONIC_DIRICHLET = "H_D"
    EXACT_DIRICHLET = "E_D"
    COEXACT_NEUMANN = "cE_N"
    BOUNDARY_N = "cEH_N"
    INTERIOR_N = "EdH_N"
    BOUNDARY_D = "EH_D"
    INTERIOR_D = "cEdH_D"
    EXACT_COEXACT = "EcE"
    HARMONIC = "H"

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Columns are cochains of one degree forming a mass-orthonormal basis."""

    degree: int
    carrier: Carrier
    role: SubspaceRole
    columns: np.ndarray

    @property
    def dimension(self) -> int:
        return int(self.columns.shape[1])

    def cochain(self, i: int) -> Cochain:
        return Cochain(self.degree, self.carrier, self.columns[:, i])

    def cochains(self) -> list[Cochain]:
        return [self.cochain(i) for i in range(self.dimension)]

    def gram(self, mass: np.ndarray) -> np.ndarray:
        return self.columns.T @ mass @ self.columns

    def project(self, values: np.ndarray, mass: np.ndarray) -> np.ndarray:
        """Orthogonal projection of a vector (or columns) onto the span."""
        return self.columns @ (self.columns.T @ (mass @ values))


@dataclass(frozen=True, eq=False)
class PrincipalAngleSet:
    """Cosines of principal angles (descending) with their principal vectors."""

    degree: int
    cosines: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    @property
    def angles(self) -> np.ndarray:
        """Principal angles in radians, ascending."""
        return np.arccos(self.cosines)

    def __len__(self) -> int:
        return int(self.cosines.size)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "cosines": self.cosines.tolist(),
            "angles": self.angles.tolist(),
        }


def principal_angles(
    a: SubspaceBasis | np.ndarray,
    b: SubspaceBasis | np.ndarray,
    mass: np.ndarray | None = None,
    *,
    degree: int | None = None,
    orthonormal_atol: float = 1e-10,
) -> PrincipalAngleSet:
    """Principal angles between two subspaces from the SVD of ``A^T M B``.

    Args:
        a: First basis (SubspaceBasis or matrix of columns)
        b: Second basis
        mass: Inner product matrix, identity when omitted
        degree: Degree reported on the result (taken from ``a`` when it is a basis)
        orthonormal_atol: Allowed deviation of ``A^T M A`` from the identity

    Raises:
        ParameterError: Mismatched degrees or carriers, or non-orthonormal input
    """
    if isinstance(a, SubspaceBasis) and isinstance(b, SubspaceBasis):
        if a.degree != b.degree or a.carrier is not b.carrier:
            raise ParameterError("principal angles need bases of equal degree and carrier", module="hodge")
    if degree is None:
        degree = a.degree if isinstance(a, SubspaceBasis) else 0
    left = a.columns if isinstance(a, SubspaceBasis) else np.asarray(a, dtype=float)
    right = b.columns if isinstance(b, SubspaceBasis) else np.asarray(b, dtype=float)
    if left.shape[0] != right.shape[0]:
        raise ParameterError("bases live in spaces of different dimension", module="hodge")
    if mass is None:
        mass = np.eye(left.shape[0])

    for name, basis in (("first", left), ("second", right)):
        deviation = np.max(np.abs(basis.T @ mass @ basis - np.eye(basis.shape[1])), initial=0.0)
        if deviation > orthonormal_atol:
            raise ParameterError(
                f"{name} basis is not mass-orthonormal (deviation {deviation:.3e})", module="hodge"
            )

    count = min(left.shape[1], right.shape[1])
    if count == 0:
        empty = np.zeros((left.shape[0], 0))
        return PrincipalAngleSet(degree, np.zeros(0), empty, empty.copy())

    u, s, vt = linalg.svd(left.T @ mass @ right, full_matrices=False)
    overshoot = np.max(s) - 1.0
    if overshoot > 1e-12:
        logger.warning(f"Principal-angle cosine overshoots 1 by {overshoot:.3e}; clamping")
    cosines = np.clip(s[:count], 0.0, 1.0)
    return PrincipalAngleSet(
        degree=degree,
        cosines=cosines,
        left_vectors=left @ u[:, :count],
        right_vectors=right @ vt.T[:, :count],
    )


def subspace_distance(
    a: SubspaceBasis | np.ndarray,
    b: SubspaceBasis | np.ndarray,
    mass: np.ndarray | None = None,
) -> float:
    """Sine of the largest principal angle; 1.0 when the dimensions differ."""
    left = a.columns if isinstance(a, SubspaceBasis) else np.asarray(a, dtype=float)
    right = b.columns if isinstance(b, SubspaceBasis) else np.asarray(b, dtype=float)
    if left.shape[1] != right.shape[1]:
        return 1.0
    if left.shape[1] == 0:
        return 0.0
    if mass is None:
        mass = np.eye(left.shape[0])
    # Residual of projecting A onto B; its norm is accurate for nearly equal subspaces.
    residual = left - right @ (right.T @ mass @ left)
    largest = float(np.max(np.linalg.eigvalsh(residual.T @ mass @ residual)))
    return float(min(1.0, np.sqrt(max(largest, 0.0))))
