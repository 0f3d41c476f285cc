# this_file: src/pdangles/dtn/operator.py
"""Dirichlet-to-Neumann operators for differential forms.

For boundary data phi the solver picks the interior extension w with trace phi that
minimises ||dw||^2, gauged orthogonal to closed forms vanishing on the boundary. Then
Lambda phi is the normal trace of dw, stored as its Riesz representative: a boundary
cochain of the same degree as phi. ``DtNSolver.as_normal_cochain`` turns it into the
boundary (n-p-1)-cochain itself.

The normal is inward by default: Lambda_0 of the trace of a function is minus its
outward normal derivative. ``inward=False`` gives the outward flux of the forms layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy import linalg

from ..errors import DegreeError, MeshValidationError
from ..forms.cochain import Carrier, Cochain
from ..forms.linalg import (
    null_space_basis,
    numerical_rank,
    pseudo_inverse,
    range_basis,
    solve_lower,
    solve_lower_transpose,
)
from ..forms.operators import DiscreteForms
from ..hodge.subspaces import principal_angles, subspace_distance


@dataclass(frozen=True)
class BvpDiagnostics:
    """Relative residuals of the boundary value problem solves behind one operator."""

    trace_residual: float
    coclosed_residual: float
    harmonic_residual: float

    def to_dict(self) -> dict[str, float]:
        return {
            "trace_residual": self.trace_residual,
            "coclosed_residual": self.coclosed_residual,
            "harmonic_residual": self.harmonic_residual,
        }


@dataclass(frozen=True, eq=False)
class DtNOperator:
    """Lambda_p as a square matrix on boundary p-cochains.

    ``matrix`` returns Riesz representatives. ``stiffness`` is the energy form
    ``<dw_i, dw_j>``, symmetric positive semi-definite, and
    ``M_boundary @ matrix = flux_sign * stiffness``.
    """

    degree: int
    matrix: np.ndarray
    stiffness: np.ndarray
    diagnostics: BvpDiagnostics
    asymmetry: float
    flux_sign: float = -1.0

    def apply(self, values: np.ndarray) -> np.ndarray:
        return self.matrix @ values


@dataclass(frozen=True)
class KernelDecomposition:
    """``ker Lambda_p = traces of the boundary subspace (+) exact boundary forms``."""

    degree: int
    kernel_dim: int
    exact_dim: int
    boundary_dim: int
    quotient_dim: int
    max_cosine: float
    reconstruction_distance: float
    boundary_traces: np.ndarray
    exact_forms: np.ndarray

    @property
    def consistent(self) -> bool:
        return self.quotient_dim == self.boundary_dim

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "kernel_dim": self.kernel_dim,
            "exact_dim": self.exact_dim,
            "boundary_dim": self.boundary_dim,
            "quotient_dim": self.quotient_dim,
            "max_cosine": self.max_cosine,
            "reconstruction_distance": self.reconstruction_distance,
        }


class DtNSolver:
    """Boundary value problems, Lambda_p and the subspaces attached to it."""

    def __init__(self, forms: DiscreteForms, *, inward: bool = True):
        """Bind the solver to one mesh.

        Args:
            forms: Discrete forms of a mesh with boundary
            inward: Measure normal traces against the inward normal
        """
        if forms.is_closed:
            raise MeshValidationError("the Dirichlet-to-Neumann operator needs a boundary", module="dtn")
        self.forms = forms
        self.inward = inward
        self.flux_sign = -1.0 if inward else 1.0
        self.tolerances = forms.tolerances
        self._cache: dict[tuple, object] = {}

    @property
    def dim(self) -> int:
        return self.forms.dim

    def _memo(self, key: tuple, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def _check(self, p: int) -> None:
        if not 0 <= p <= self.dim - 1:
            raise DegreeError(f"boundary degree {p} outside 0..{self.dim - 1}", module="dtn")

    # ----- boundary value problem --------------------------------------------------

    def _bvp_factors(self, p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Whitened interior energy operator split into range and kernel parts."""

        def build():
            forms = self.forms
            inside = forms.interior_dofs(p)
            k = forms.interior_factor(p)
            energy = forms.factor(p + 1).T @ forms.incidence(p)[:, inside]
            whitened = solve_lower(k, energy.T).T
            u, s, vt = linalg.svd(whitened, full_matrices=True)
            rank = numerical_rank(s, self.tolerances, what=f"BVP energy in degree {p}", module="dtn")
            # Closed forms vanishing on the boundary, mass-orthonormal, interior coordinates.
            gauge = solve_lower_transpose(k, vt[rank:].T)
            return u[:, :rank], s[:rank], vt[:rank].T, gauge

        return self._memo(("bvp", p), build)

    def solve_bvp_matrix(self, p: int, data: np.ndarray) -> tuple[np.ndarray, BvpDiagnostics]:
        """Solve for the columns of ``data`` (boundary p-cochains) at once.

        Returns:
            Interior p-cochains as columns, and residual diagnostics
        """
        self._check(p)
        forms = self.forms
        data = np.atleast_2d(np.asarray(data, dtype=float).T).T
        if data.shape[0] != forms.size(p, Carrier.BOUNDARY):
            raise DegreeError(f"boundary {p}-data has {data.shape[0]} rows", module="dtn")
        inside = forms.interior_dofs(p)
        u, s, v, gauge = self._bvp_factors(p)
        k = forms.interior_factor(p)

        omega = forms.extension_matrix(p) @ data
        rhs = forms.factor(p + 1).T @ (forms.incidence(p) @ omega)
        y = -(v / s) @ (u.T @ rhs)
        omega[inside] += solve_lower_transpose(k, y)
        mass = forms.mass(p)
        omega[inside] -= gauge @ (gauge.T @ (mass[inside] @ omega))
        return omega, self._diagnostics(p, data, omega)

    def _diagnostics(self, p: int, data: np.ndarray, omega: np.ndarray) -> BvpDiagnostics:
        forms = self.forms
        scale = max(float(np.max(np.abs(data), initial=0.0)), 1e-300)
        trace = float(np.max(np.abs(forms.tangential_matrix(p) @ omega - data), initial=0.0)) / scale
        weak = forms.incidence(p).T @ (forms.mass(p + 1) @ (forms.incidence(p) @ omega))
        inside = forms.interior_dofs(p)
        energy_scale = max(float(np.max(np.abs(weak), initial=0.0)), 1e-300)
        harmonic = float(np.max(np.abs(weak[inside]), initial=0.0)) / energy_scale
        coclosed = 0.0
        if p > 0:
            lower = forms.interior_dofs(p - 1)
            flux = forms.incidence(p - 1).T @ (forms.mass(p) @ omega)
            mass_scale = max(float(np.max(np.abs(forms.mass(p) @ omega), initial=0.0)), 1e-300)
            coclosed = float(np.max(np.abs(flux[lower]), initial=0.0)) / mass_scale
        return BvpDiagnostics(trace, coclosed, harmonic)

    def solve_bvp(self, p: int, phi: Cochain) -> Cochain:
        """Harmonic extension of boundary data: ``i* w = phi``, ``delta w = 0``, ``dw`` harmonic."""
        self.forms._expect(phi, p, Carrier.BOUNDARY)
        omega, diagnostics = self.solve_bvp_matrix(p, phi.values[:, None])
        logger.debug(f"BVP degree {p}: {diagnostics}")
        return Cochain(p, Carrier.INTERIOR, omega[:, 0])

    # ----- Lambda ------------------------------------------------------------------

    def operator(self, p: int) -> DtNOperator:
        """Assemble Lambda_p column by column from boundary value problems."""
        self._check(p)

        def build() -> DtNOperator:
            forms = self.forms
            size = forms.size(p, Carrier.BOUNDARY)
            omega, diagnostics = self.solve_bvp_matrix(p, np.eye(size))
            d = forms.incidence(p)
            weak = d.T @ (forms.mass(p + 1) @ (d @ omega))
            stiffness = forms.tangential_matrix(p) @ weak
            asymmetry = float(np.max(np.abs(stiffness - stiffness.T), initial=0.0))
            stiffness = 0.5 * (stiffness + stiffness.T)
            matrix = self.flux_sign * np.linalg.solve(forms.mass(p, Carrier.BOUNDARY), stiffness)
            logger.info(f"Assembled Lambda_{p} on {size} boundary {p}-simplices")
            return DtNOperator(p, matrix, stiffness, diagnostics, asymmetry, self.flux_sign)

        return self._memo(("lambda", p), build)

    def lambda_(self, p: int, phi: Cochain) -> Cochain:
        """``Lambda_p phi``: Riesz representative of the normal trace of ``d w``."""
        self.forms._expect(phi, p, Carrier.BOUNDARY)
        return Cochain(p, Carrier.BOUNDARY, self.operator(p).apply(phi.values))

    def _whitened_stiffness(self, p: int) -> np.ndarray:
        factor = self.forms.factor(p, Carrier.BOUNDARY)
        stiffness = self.operator(p).stiffness
        return solve_lower(factor, solve_lower(factor, stiffness).T).T

    def kernel(self, p: int) -> np.ndarray:
        """Boundary-mass-orthonormal basis of ker Lambda_p (columns)."""

        def build() -> np.ndarray:
            y = null_space_basis(
                self._whitened_stiffness(p), self.tolerances, what=f"ker Lambda_{p}", module="dtn"
            )
            return self.forms.unwhiten(p, y, Carrier.BOUNDARY)

        self._check(p)
        return self._memo(("kernel", p), build)

    def rank(self, p: int) -> int:
        return self.forms.size(p, Carrier.BOUNDARY) - self.kernel(p).shape[1]

    def stiffness_pinv(self, p: int) -> np.ndarray:
        """Pseudo-inverse of the energy form of Lambda_p, cut at the spectral gap."""
        self._check(p)
        return self._memo(
            ("pinv", p),
            lambda: pseudo_inverse(self.operator(p).stiffness, self.tolerances, what=f"Lambda_{p}"),
        )

    def lambda_pinv(self, p: int, nu: np.ndarray) -> tuple[np.ndarray, float]:
        """Minimum-norm preimage under Lambda_p and the relative residual of the fit.

        The residual measures how far ``nu`` is from the image of Lambda_p.
        """
        self._check(p)
        mass = self.forms.mass(p, Carrier.BOUNDARY)
        phi = self.flux_sign * (self.stiffness_pinv(p) @ (mass @ nu))
        miss = self.operator(p).apply(phi) - nu
        scale = np.sqrt(max(float(nu @ mass @ nu), 1e-300))
        return phi, float(np.sqrt(max(float(miss @ mass @ miss), 0.0)) / scale)

    def as_normal_cochain(self, p: int, riesz: Cochain) -> Cochain:
        """The boundary (n-p-1)-cochain whose Riesz representative is ``riesz``.

        Inverts ``DiscreteForms.riesz_matrix`` in the least-squares sense; the pairing
        can be singular (alternating patterns on an even cycle), and then the
        minimum-norm form is returned.
        """
        self._check(p)
        forms = self.forms
        forms._expect(riesz, p, Carrier.BOUNDARY)
        pairing = forms.wedge_pairing(p)
        target = forms.mass(p, Carrier.BOUNDARY) @ riesz.values
        values = linalg.lstsq(pairing, target, cond=self.tolerances.pinv_rtol)[0]
        return Cochain(self.dim - 1 - p, Carrier.BOUNDARY, values)

    # ----- subspaces ---------------------------------------------------------------

    def closed_forms(self, p: int) -> np.ndarray:
        """Mass-orthonormal basis of closed interior p-forms."""

        def build() -> np.ndarray:
            y = null_space_basis(self.forms.whitened_d(p), self.tolerances, what=f"ker d_{p}", module="dtn")
            return self.forms.unwhiten(p, y)

        return self._memo(("closed", p), build)

    def harmonic_trace_image(self, p: int) -> np.ndarray:
        """Boundary-mass-orthonormal basis of the traces of harmonic p-fields.

        Traces of closed forms and of harmonic fields coincide, because closed forms
        differ from harmonic ones by exact Dirichlet forms, whose traces vanish.
        """
        self._check(p)

        def build() -> np.ndarray:
            factor = self.forms.factor(p, Carrier.BOUNDARY)
            traces = factor.T @ (self.forms.tangential_matrix(p) @ self.closed_forms(p))
            q = range_basis(traces, self.tolerances, what=f"i*H^{p}", module="dtn")
            return self.forms.unwhiten(p, q, Carrier.BOUNDARY)

        return self._memo(("image", p), build)

    def kernel_image_distance(self, p: int) -> float:
        """Subspace distance between ker Lambda_p and the traces of harmonic fields."""
        mass = self.forms.mass(p, Carrier.BOUNDARY)
        return subspace_distance(self.kernel(p), self.harmonic_trace_image(p), mass)

    def exact_forms(self, p: int) -> np.ndarray:
        """Boundary-mass-orthonormal basis of exact boundary p-forms."""
        self._check(p)
        forms = self.forms
        if p == 0:
            return np.zeros((forms.size(0, Carrier.BOUNDARY), 0))
        factor = forms.factor(p, Carrier.BOUNDARY)
        q = range_basis(
            factor.T @ forms.incidence(p - 1, Carrier.BOUNDARY), self.tolerances,
            what=f"E^{p}(dM)", module="dtn",
        )
        return forms.unwhiten(p, q, Carrier.BOUNDARY)

    def exact_annihilation_residual(self, p: int, rng: np.random.Generator) -> float:
        """``||Lambda d mu|| / (||Lambda|| ||d mu||)`` for a random boundary (p-1)-cochain mu."""
        self._check(p)
        if p == 0:
            return 0.0
        forms = self.forms
        mu = forms.random(p - 1, rng, Carrier.BOUNDARY)
        phi = forms.d(p - 1, mu)
        out = self.lambda_(p, phi)
        norm = float(linalg.norm(self._whitened_stiffness(p), 2))
        return forms.norm(out) / max(norm * forms.norm(phi), 1e-300)

    def kernel_decomposition(self, p: int, boundary_n: np.ndarray) -> KernelDecomposition:
        """Split ker Lambda_p into traces of the boundary subspace and exact boundary forms.

        Args:
            p: Degree
            boundary_n: Columns spanning the boundary subspace of H^p_N (interior cochains)
        """
        self._check(p)
        forms = self.forms
        mass = forms.mass(p, Carrier.BOUNDARY)
        factor = forms.factor(p, Carrier.BOUNDARY)
        kernel = self.kernel(p)
        exact = self.exact_forms(p)
        traces = forms.tangential_matrix(p) @ np.asarray(boundary_n, dtype=float).reshape(
            forms.size(p), -1
        )
        boundary = forms.unwhiten(
            p, range_basis(factor.T @ traces, self.tolerances, what="i*cEH_N", module="dtn"),
            Carrier.BOUNDARY,
        )
        angles = principal_angles(boundary, exact, mass, degree=p)
        combined = forms.unwhiten(
            p,
            range_basis(factor.T @ np.hstack([exact, boundary]), self.tolerances, module="dtn"),
            Carrier.BOUNDARY,
        )
        return KernelDecomposition(
            degree=p,
            kernel_dim=kernel.shape[1],
            exact_dim=exact.shape[1],
            boundary_dim=boundary.shape[1],
            quotient_dim=kernel.shape[1] - exact.shape[1],
            max_cosine=float(np.max(angles.cosines, initial=0.0)),
            reconstruction_distance=subspace_distance(combined, kernel, mass),
            boundary_traces=boundary,
            exact_forms=exact,
        )

    # ----- the scalar case on a disk -----------------------------------------------

    def lambda0_fourier_error(self, k: int) -> dict:
        """Compare Lambda_0 on ``cos(k theta)`` with ``(k / R) cos(k theta)``.

        The reference carries the solver's sign: negative for the inward normal.
        """
        forms = self.forms
        coords = forms.geometry.vertex_coords
        if coords is None or forms.dim != 2:
            raise MeshValidationError("the Fourier check needs an embedded planar mesh", module="dtn")
        points = np.asarray(coords, dtype=float)[forms.complex.boundary.parent_vertices]
        theta = np.arctan2(points[:, 1], points[:, 0])
        radius = float(np.mean(np.hypot(points[:, 0], points[:, 1])))
        phi = Cochain(0, Carrier.BOUNDARY, np.cos(k * theta))
        out = self.lambda_(0, phi).values
        expected = self.flux_sign * (k / radius) * np.cos(k * theta)
        mass = forms.mass(0, Carrier.BOUNDARY)
        diff = out - expected
        return {
            "k": k,
            "relative_error": float(np.sqrt(diff @ mass @ diff / (expected @ mass @ expected))),
            "inward": self.inward,
        }
