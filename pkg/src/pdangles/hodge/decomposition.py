# this_file: src/pdangles/hodge/decomposition.py
"""Hodge-Morrey-Friedrichs decomposition and the interior/boundary splits of harmonic fields.

All subspaces are computed in whitened coordinates ``y = L^T omega`` (``M = L L^T``),
where the mass inner product is Euclidean and null spaces come from plain SVDs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy import linalg

from ..errors import DegreeError, IllConditionedError, SpectralGapError
from ..forms.cochain import Carrier, Cochain
from ..forms.linalg import null_space_basis, range_basis, solve_lower, solve_lower_transpose
from ..forms.operators import DiscreteForms
from ..mesh.homology import betti_numbers, relative_betti_numbers
from .subspaces import PrincipalAngleSet, SubspaceBasis, SubspaceRole, principal_angles


@dataclass(frozen=True)
class MorreyParts:
    """``omega = coexact_n + harmonic + exact_d`` with mutually orthogonal terms."""

    coexact_n: Cochain
    harmonic: Cochain
    exact_d: Cochain


@dataclass(frozen=True)
class FiveTermParts:
    """``omega = cE_N + EcE + H_N part + H_D part + E_D``."""

    coexact_n: Cochain
    exact_coexact: Cochain
    neumann: Cochain
    dirichlet: Cochain
    exact_d: Cochain
    condition_number: float

    def parts(self) -> tuple[Cochain, ...]:
        return (self.coexact_n, self.exact_coexact, self.neumann, self.dirichlet, self.exact_d)


@dataclass(frozen=True)
class InteriorBoundarySplit:
    """Boundary and interior subspaces of H_N and H_D for one degree."""

    boundary_n: SubspaceBasis
    interior_n: SubspaceBasis
    boundary_d: SubspaceBasis
    interior_d: SubspaceBasis
    cosines: np.ndarray


class HodgeDecomposition:
    """Harmonic fields, decompositions and Poincare duality angles of one mesh."""

    def __init__(self, forms: DiscreteForms):
        self.forms = forms
        self.tolerances = forms.tolerances
        self._cache: dict[tuple, object] = {}

    # ----- whitened building blocks ------------------------------------------------

    def _memo(self, key: tuple, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def _check(self, p: int) -> None:
        if not 0 <= p <= self.forms.dim:
            raise DegreeError(f"degree {p} outside 0..{self.forms.dim}")

    def _basis(self, p: int, role: SubspaceRole, columns: np.ndarray) -> SubspaceBasis:
        return SubspaceBasis(degree=p, carrier=Carrier.INTERIOR, role=role, columns=columns)

    def _whiten(self, p: int, columns: np.ndarray) -> np.ndarray:
        return self.forms.factor(p).T @ columns

    def _stack(self, p: int, blocks: list[np.ndarray]) -> np.ndarray:
        blocks = [b for b in blocks if b.shape[0]]
        if not blocks:
            return np.zeros((0, self.forms.size(p)))
        return np.vstack(blocks)

    def _dirichlet_codiff_rows(self, p: int, right: np.ndarray) -> np.ndarray:
        # K_{p-1}^-1 D_{p-1}[:, I_{p-1}]^T right: co-closedness against Dirichlet (p-1)-forms.
        if p == 0:
            return np.zeros((0, right.shape[1]))
        inside = self.forms.interior_dofs(p - 1)
        if inside.size == 0:
            return np.zeros((0, right.shape[1]))
        coboundary = self.forms.incidence(p - 1)[:, inside]
        return solve_lower(self.forms.interior_factor(p - 1), coboundary.T @ right)

    # ----- harmonic fields ---------------------------------------------------------

    def harmonic_neumann_fields(self, p: int) -> SubspaceBasis:
        """Basis of ``{d w = 0, delta w = 0, normal trace of w = 0}``; dimension b_p."""
        self._check(p)

        def build() -> SubspaceBasis:
            blocks = [self.forms.whitened_d(p)]
            if p > 0:
                blocks.append(self.forms.whitened_adjoint_rows(p))
            y = null_space_basis(self._stack(p, blocks), self.tolerances, what=f"H^{p}_N")
            logger.debug(f"dim H^{p}_N = {y.shape[1]}")
            return self._basis(p, SubspaceRole.HARMONIC_NEUMANN, self.forms.unwhiten(p, y))

        return self._memo(("H_N", p), build)

    def harmonic_dirichlet_fields(self, p: int) -> SubspaceBasis:
        """Basis of ``{d w = 0, delta w = 0, tangential trace of w = 0}``; dimension b_{n-p}."""
        self._check(p)
        if self.forms.is_closed:
            neumann = self.harmonic_neumann_fields(p)
            return self._basis(p, SubspaceRole.HARMONIC_DIRICHLET, neumann.columns)

        def build() -> SubspaceBasis:
            inside = self.forms.interior_dofs(p)
            columns = np.zeros((self.forms.size(p), 0))
            if inside.size:
                k = self.forms.interior_factor(p)
                blocks = []
                if p < self.forms.dim:
                    coboundary = self.forms.incidence(p)[:, inside]
                    blocks.append(self.forms.factor(p + 1).T @ solve_lower(k, coboundary.T).T)
                if p > 0:
                    lower = self.forms.interior_dofs(p - 1)
                    if lower.size:
                        block = self.forms.incidence(p - 1)[np.ix_(inside, lower)]
                        blocks.append(solve_lower(self.forms.interior_factor(p - 1), block.T @ k))
                rows = np.vstack(blocks) if blocks else np.zeros((0, inside.size))
                y = null_space_basis(rows, self.tolerances, what=f"H^{p}_D")
                columns = np.zeros((self.forms.size(p), y.shape[1]))
                columns[inside] = solve_lower_transpose(k, y)
            logger.debug(f"dim H^{p}_D = {columns.shape[1]}")
            return self._basis(p, SubspaceRole.HARMONIC_DIRICHLET, columns)

        return self._memo(("H_D", p), build)

    def harmonic_fields(self, p: int) -> SubspaceBasis:
        """Closed p-forms co-closed against the Dirichlet subcomplex (no boundary condition)."""
        self._check(p)

        def build() -> SubspaceBasis:
            blocks = [self.forms.whitened_d(p), self._dirichlet_codiff_rows(p, self.forms.factor(p))]
            y = null_space_basis(self._stack(p, blocks), self.tolerances, what=f"H^{p}")
            return self._basis(p, SubspaceRole.HARMONIC, self.forms.unwhiten(p, y))

        return self._memo(("H", p), build)

    # ----- Morrey ------------------------------------------------------------------

    def _exact_dirichlet_range(self, p: int) -> np.ndarray:
        def build() -> np.ndarray:
            if p == 0:
                return np.zeros((self.forms.size(p), 0))
            inside = self.forms.interior_dofs(p - 1)
            image = self._whiten(p, self.forms.incidence(p - 1)[:, inside])
            return range_basis(image, self.tolerances, what=f"E^{p}_D")

        return self._memo(("E_D", p), build)

    def _coexact_neumann_range(self, p: int) -> np.ndarray:
        def build() -> np.ndarray:
            if p == self.forms.dim:
                return np.zeros((self.forms.size(p), 0))
            return range_basis(self.forms.whitened_d(p).T, self.tolerances, what=f"cE^{p}_N")

        return self._memo(("cE_N", p), build)

    def exact_dirichlet_basis(self, p: int) -> SubspaceBasis:
        self._check(p)
        q = self._exact_dirichlet_range(p)
        return self._basis(p, SubspaceRole.EXACT_DIRICHLET, self.forms.unwhiten(p, q))

    def coexact_neumann_basis(self, p: int) -> SubspaceBasis:
        self._check(p)
        q = self._coexact_neumann_range(p)
        return self._basis(p, SubspaceRole.COEXACT_NEUMANN, self.forms.unwhiten(p, q))

    def morrey_decompose(self, omega: Cochain) -> MorreyParts:
        """Split into co-exact Neumann, harmonic and exact Dirichlet parts."""
        p = omega.degree
        self.forms._expect(omega, p, Carrier.INTERIOR)
        y = self.forms.whiten(omega)
        exact = self._exact_dirichlet_range(p)
        coexact = self._coexact_neumann_range(p)
        y_exact = exact @ (exact.T @ y)
        y_coexact = coexact @ (coexact.T @ y)
        y_harmonic = y - y_exact - y_coexact
        back = self.forms.unwhiten
        return MorreyParts(
            coexact_n=Cochain(p, Carrier.INTERIOR, back(p, y_coexact)),
            harmonic=Cochain(p, Carrier.INTERIOR, back(p, y_harmonic)),
            exact_d=Cochain(p, Carrier.INTERIOR, back(p, y_exact)),
        )

    # ----- Friedrichs --------------------------------------------------------------

    def _harmonic_sum(self, p: int) -> tuple[np.ndarray, int, float]:
        # Whitened [H_N | H_D] columns, the split index and the condition number.
        def build():
            y_n = self._whiten(p, self.harmonic_neumann_fields(p).columns)
            if self.forms.is_closed:
                return y_n, y_n.shape[1], 1.0
            y_d = self._whiten(p, self.harmonic_dirichlet_fields(p).columns)
            stacked = np.hstack([y_n, y_d])
            if stacked.shape[1] == 0:
                return stacked, 0, 1.0
            s = linalg.svdvals(stacked)
            condition = float(s[0] / s[-1]) if s[-1] > 0 else float("inf")
            return stacked, y_n.shape[1], condition

        return self._memo(("H_N+H_D", p), build)

    def five_term_decompose(self, omega: Cochain) -> FiveTermParts:
        """Refine the harmonic Morrey part into EcE, H_N and H_D pieces.

        Raises:
            IllConditionedError: When H_N and H_D nearly intersect
        """
        p = omega.degree
        morrey = self.morrey_decompose(omega)
        stacked, split, condition = self._harmonic_sum(p)
        if condition > self.tolerances.max_condition:
            raise IllConditionedError(condition)
        h = self.forms.whiten(morrey.harmonic)
        coefficients = np.zeros(stacked.shape[1])
        if stacked.shape[1]:
            coefficients = linalg.lstsq(stacked, h)[0]
        y_n = stacked[:, :split] @ coefficients[:split]
        y_d = stacked[:, split:] @ coefficients[split:]
        back = self.forms.unwhiten
        return FiveTermParts(
            coexact_n=morrey.coexact_n,
            exact_coexact=Cochain(p, Carrier.INTERIOR, back(p, h - y_n - y_d)),
            neumann=Cochain(p, Carrier.INTERIOR, back(p, y_n)),
            dirichlet=Cochain(p, Carrier.INTERIOR, back(p, y_d)),
            exact_d=morrey.exact_d,
            condition_number=condition,
        )

    def exact_coexact_basis(self, p: int) -> SubspaceBasis:
        """Harmonic fields orthogonal to both H_N and H_D."""
        self._check(p)

        def build() -> SubspaceBasis:
            y_h = self._whiten(p, self.harmonic_fields(p).columns)
            stacked, _, _ = self._harmonic_sum(p)
            q = range_basis(stacked, self.tolerances, what=f"H^{p}_N + H^{p}_D")
            remainder = y_h - q @ (q.T @ y_h)
            y = range_basis(remainder, self.tolerances, what=f"EcE^{p}")
            return self._basis(p, SubspaceRole.EXACT_COEXACT, self.forms.unwhiten(p, y))

        return self._memo(("EcE", p), build)

    # ----- interior / boundary splits ---------------------------------------------

    def _split(self, p: int) -> InteriorBoundarySplit:
        def build() -> InteriorBoundarySplit:
            neumann = self.harmonic_neumann_fields(p)
            dirichlet = self.harmonic_dirichlet_fields(p)
            n_cols, d_cols = neumann.columns, dirichlet.columns
            size = self.forms.size(p)
            if self.forms.is_closed:
                empty = np.zeros((size, 0))
                return InteriorBoundarySplit(
                    boundary_n=self._basis(p, SubspaceRole.BOUNDARY_N, empty),
                    interior_n=self._basis(p, SubspaceRole.INTERIOR_N, n_cols),
                    boundary_d=self._basis(p, SubspaceRole.BOUNDARY_D, empty.copy()),
                    interior_d=self._basis(p, SubspaceRole.INTERIOR_D, d_cols),
                    cosines=np.ones(n_cols.shape[1]),
                )
            cross = n_cols.T @ self.forms.mass(p) @ d_cols
            u, s, vt = linalg.svd(cross, full_matrices=True) if cross.size else (
                np.eye(n_cols.shape[1]), np.zeros(0), np.eye(d_cols.shape[1])
            )
            rank = int(np.count_nonzero(s > self.tolerances.angle_atol))
            if 0 < rank < s.size and s[rank] > 0 and s[rank - 1] / s[rank] < self.tolerances.gap_ratio:
                raise SpectralGapError(float(s[rank - 1]), float(s[rank]), what=f"H^{p}_N x H^{p}_D")
            v = vt.T
            logger.debug(f"degree {p}: {rank} interior pairs, cosines {np.round(s[:rank], 6)}")
            return InteriorBoundarySplit(
                boundary_n=self._basis(p, SubspaceRole.BOUNDARY_N, n_cols @ u[:, rank:]),
                interior_n=self._basis(p, SubspaceRole.INTERIOR_N, n_cols @ u[:, :rank]),
                boundary_d=self._basis(p, SubspaceRole.BOUNDARY_D, d_cols @ v[:, rank:]),
                interior_d=self._basis(p, SubspaceRole.INTERIOR_D, d_cols @ v[:, :rank]),
                cosines=np.clip(s[:rank], 0.0, 1.0),
            )

        self._check(p)
        return self._memo(("split", p), build)

    def interior_boundary_split_N(self, p: int) -> tuple[SubspaceBasis, SubspaceBasis]:
        """``(boundary, interior)`` subspaces of H^p_N; boundary = H^p_N orthogonal to H^p_D."""
        split = self._split(p)
        return split.boundary_n, split.interior_n

    def interior_boundary_split_D(self, p: int) -> tuple[SubspaceBasis, SubspaceBasis]:
        """``(boundary, interior)`` subspaces of H^p_D; boundary = H^p_D orthogonal to H^p_N."""
        split = self._split(p)
        return split.boundary_d, split.interior_d

    def poincare_duality_angles(self, p: int) -> PrincipalAngleSet:
        """Principal angles between the interior subspaces of H^p_N and H^p_D."""
        _, interior_n = self.interior_boundary_split_N(p)
        _, interior_d = self.interior_boundary_split_D(p)
        return principal_angles(interior_n, interior_d, self.forms.mass(p))

    def trace_criterion(self, p: int) -> dict[str, float]:
        """Cross-check of the split against exactness of tangential traces.

        Returns:
            ``interior_max`` (largest non-exact fraction of an interior field's trace,
            expected ~0) and ``boundary_min`` (smallest non-exact fraction over unit
            boundary fields, expected bounded away from 0)
        """
        boundary_n, interior_n = self.interior_boundary_split_N(p)
        if self.forms.is_closed or p == self.forms.dim:
            return {"interior_max": 0.0, "boundary_min": 0.0 if boundary_n.dimension == 0 else 1.0}
        forms = self.forms
        factor = forms.factor(p, Carrier.BOUNDARY)
        if p == 0:
            exact = np.zeros((forms.size(0, Carrier.BOUNDARY), 0))
        else:
            exact = range_basis(
                factor.T @ forms.incidence(p - 1, Carrier.BOUNDARY), self.tolerances, what="E(dM)"
            )

        def fractions(columns: np.ndarray) -> np.ndarray:
            z = factor.T @ (forms.tangential_matrix(p) @ columns)
            remainder = z - exact @ (exact.T @ z)
            return np.linalg.norm(remainder, axis=0) / np.maximum(np.linalg.norm(z, axis=0), 1e-300)

        interior = fractions(interior_n.columns)
        boundary_min = 0.0
        if boundary_n.dimension:
            # Smallest singular value of the non-exact part of the trace on the boundary span.
            z = factor.T @ (forms.tangential_matrix(p) @ boundary_n.columns)
            boundary_min = float(np.min(linalg.svdvals(z - exact @ (exact.T @ z))))
        return {
            "interior_max": float(np.max(interior, initial=0.0)),
            "boundary_min": boundary_min,
        }

    # ----- projections -------------------------------------------------------------

    def project_neumann(self, omega: Cochain) -> Cochain:
        """Orthogonal projection onto H^p_N."""
        basis = self.harmonic_neumann_fields(omega.degree)
        return Cochain(omega.degree, Carrier.INTERIOR, basis.project(omega.values, self.forms.mass(omega.degree)))

    def project_dirichlet(self, omega: Cochain) -> Cochain:
        """Orthogonal projection onto H^p_D."""
        basis = self.harmonic_dirichlet_fields(omega.degree)
        return Cochain(omega.degree, Carrier.INTERIOR, basis.project(omega.values, self.forms.mass(omega.degree)))

    # ----- diagnostics -------------------------------------------------------------

    def constraint_residuals(self, basis: SubspaceBasis) -> float:
        """Largest relative violation of the defining constraints of a harmonic basis."""
        forms = self.forms
        p = basis.degree
        worst = 0.0
        for omega in basis.cochains():
            scale = max(forms.norm(omega), 1e-300)
            checks = []
            if p < forms.dim:
                checks.append(forms.norm(forms.d(p, omega)))
            if p > 0:
                checks.append(forms.norm(forms.delta(p, omega)))
            if not forms.is_closed:
                if basis.role is SubspaceRole.HARMONIC_NEUMANN and p > 0:
                    checks.append(forms.norm(forms.normal_trace(omega)))
                if basis.role is SubspaceRole.HARMONIC_DIRICHLET and p < forms.dim:
                    checks.append(forms.norm(forms.tangential_trace(omega)))
            worst = max(worst, max(checks, default=0.0) / scale)
        return worst

    def orthogonality_residuals(self, p: int, rng: np.random.Generator) -> dict[str, float]:
        """Maxima of the cross inner products that the decompositions make vanish."""
        mass = self.forms.mass(p)
        split = self._split(p)
        n_cols = self.harmonic_neumann_fields(p).columns
        d_cols = self.harmonic_dirichlet_fields(p).columns

        def cross(a: np.ndarray, b: np.ndarray) -> float:
            return float(np.max(np.abs(a.T @ mass @ b), initial=0.0))

        omega = self.forms.random(p, rng)
        parts = self.morrey_decompose(omega)
        scale = self.forms.norm(omega) ** 2
        morrey = max(
            abs(self.forms.inner_product(parts.coexact_n, parts.harmonic)),
            abs(self.forms.inner_product(parts.harmonic, parts.exact_d)),
            abs(self.forms.inner_product(parts.coexact_n, parts.exact_d)),
        ) / scale
        reassembly = self.forms.norm(omega - parts.coexact_n - parts.harmonic - parts.exact_d)
        return {
            "morrey_orthogonality": morrey,
            "morrey_reassembly": reassembly / np.sqrt(scale),
            "boundary_n_vs_h_d": cross(split.boundary_n.columns, d_cols),
            "boundary_d_vs_h_n": cross(split.boundary_d.columns, n_cols),
            "boundary_n_vs_interior_n": cross(split.boundary_n.columns, split.interior_n.columns),
        }

    def report(self, p: int, seed: int = 0) -> dict:
        """JSON-ready summary for one degree."""
        self._check(p)
        betti = betti_numbers(self.forms.complex)
        relative = relative_betti_numbers(self.forms.complex)
        n = self.forms.dim
        split = self._split(p)
        angles = self.poincare_duality_angles(p)
        rng = np.random.default_rng(seed)
        _, _, condition = self._harmonic_sum(p)
        return {
            "degree": p,
            "dimension": n,
            "closed": self.forms.is_closed,
            "betti": list(betti),
            "relative_betti": list(relative),
            "expected": {"H_N": betti[p], "H_D": relative[p]},
            "dimensions": {
                "H_N": self.harmonic_neumann_fields(p).dimension,
                "H_D": self.harmonic_dirichlet_fields(p).dimension,
                "E_D": self._exact_dirichlet_range(p).shape[1],
                "cE_N": self._coexact_neumann_range(p).shape[1],
                "H": self.harmonic_fields(p).dimension,
                "cEH_N": split.boundary_n.dimension,
                "EdH_N": split.interior_n.dimension,
                "EH_D": split.boundary_d.dimension,
                "cEdH_D": split.interior_d.dimension,
                "EcE": self.exact_coexact_basis(p).dimension,
            },
            "cosines": angles.cosines.tolist(),
            "angles": angles.angles.tolist(),
            "condition_number": condition,
            "constraint_residuals": {
                "H_N": self.constraint_residuals(self.harmonic_neumann_fields(p)),
                "H_D": self.constraint_residuals(self.harmonic_dirichlet_fields(p)),
            },
            "orthogonality": self.orthogonality_residuals(p, rng),
            "trace_criterion": self.trace_criterion(p),
        }
