# this_file: src/pdangles/forms/operators.py
"""Discrete exterior calculus on Whitney forms: d, delta, traces, inner products, wedge."""

from __future__ import annotations

import numpy as np
from loguru import logger

from ..config import DEFAULT_TOLERANCES, Tolerances
from ..errors import DegreeError, MeshValidationError
from ..mesh.complex import SimplicialComplex
from ..mesh.geometry import MeshGeometry
from .cochain import Carrier, Cochain
from .linalg import cholesky_lower, cholesky_solve, solve_lower, solve_lower_transpose
from .traces import InnerProductStructure, TraceOperators
from .whitney import WhitneyGeometry


class DiscreteForms:
    """All discrete operators on one mesh, assembled once and shared by the pipelines.

    Interior cochains of degree p have one entry per p-simplex of the complex;
    boundary cochains one entry per p-simplex of the boundary complex.
    """

    def __init__(
        self,
        complex_: SimplicialComplex,
        geometry: MeshGeometry,
        tolerances: Tolerances = DEFAULT_TOLERANCES,
    ):
        """Assemble masses and traces.

        Args:
            complex_: Validated oriented complex
            geometry: Its metric
            tolerances: Numerical tolerances used by every downstream solve
        """
        self.complex = complex_
        self.geometry = geometry
        self.tolerances = tolerances
        self.whitney = WhitneyGeometry.from_lengths(complex_, geometry.lengths(complex_))
        self.boundary_whitney: WhitneyGeometry | None = None
        if complex_.boundary is not None:
            boundary_geometry = geometry.restrict(complex_)
            sub = complex_.boundary.complex
            self.boundary_whitney = WhitneyGeometry.from_lengths(sub, boundary_geometry.lengths(sub))
        self.inner = InnerProductStructure.assemble(self.whitney, self.boundary_whitney)
        self.traces = TraceOperators.assemble(complex_, self.inner)
        self._incidence = tuple(d.toarray().astype(float) for d in complex_.incidence)
        self._boundary_incidence: tuple[np.ndarray, ...] = ()
        if complex_.boundary is not None:
            self._boundary_incidence = tuple(
                d.toarray().astype(float) for d in complex_.boundary.complex.incidence
            )
        self._interior_factors: dict[int, np.ndarray] = {}
        self._wedge_tensors: dict[tuple[Carrier, int, int], np.ndarray] = {}
        self._pairings: dict[tuple[Carrier, int], np.ndarray] = {}
        logger.info(
            f"Assembled discrete forms on {self.dim}-complex "
            f"({'closed' if self.is_closed else 'with boundary'})"
        )

    @property
    def dim(self) -> int:
        return self.complex.dim

    @property
    def is_closed(self) -> bool:
        return self.complex.is_closed

    # ----- bookkeeping -------------------------------------------------------------

    def size(self, p: int, carrier: Carrier = Carrier.INTERIOR) -> int:
        top = self._top_degree(carrier)
        if not 0 <= p <= top:
            return 0
        if carrier is Carrier.INTERIOR:
            return self.complex.count(p)
        return self.complex.boundary.complex.count(p)

    def _top_degree(self, carrier: Carrier) -> int:
        if carrier is Carrier.INTERIOR:
            return self.dim
        if self.is_closed:
            raise MeshValidationError("complex has no boundary", module="forms")
        return self.dim - 1

    def _check_degree(self, p: int, carrier: Carrier) -> None:
        top = self._top_degree(carrier)
        if not 0 <= p <= top:
            raise DegreeError(f"degree {p} outside 0..{top} on the {carrier.value}")

    def cochain(self, p: int, values, carrier: Carrier = Carrier.INTERIOR) -> Cochain:
        """Wrap a coefficient vector, checking its length against the carrier."""
        self._check_degree(p, carrier)
        values = np.asarray(values, dtype=float)
        if values.shape != (self.size(p, carrier),):
            raise DegreeError(
                f"{carrier.value} {p}-cochain needs {self.size(p, carrier)} values, got {values.shape}"
            )
        return Cochain(p, carrier, values)

    def zeros(self, p: int, carrier: Carrier = Carrier.INTERIOR) -> Cochain:
        return self.cochain(p, np.zeros(self.size(p, carrier)), carrier)

    def random(
        self, p: int, rng: np.random.Generator, carrier: Carrier = Carrier.INTERIOR
    ) -> Cochain:
        return self.cochain(p, rng.standard_normal(self.size(p, carrier)), carrier)

    def interior_dofs(self, p: int) -> np.ndarray:
        """Indices of p-simplices not on the boundary (all of them when closed)."""
        return self.complex.interior_indices(p)

    def boundary_dofs(self, p: int) -> np.ndarray:
        return self.complex.boundary_indices(p)

    # ----- matrices ----------------------------------------------------------------

    def mass(self, p: int, carrier: Carrier = Carrier.INTERIOR) -> np.ndarray:
        self._check_degree(p, carrier)
        if carrier is Carrier.INTERIOR:
            return self.inner.mass[p]
        return self.inner.boundary_mass[p]

    def factor(self, p: int, carrier: Carrier = Carrier.INTERIOR) -> np.ndarray:
        """Lower Cholesky factor L of the mass matrix, M = L L^T."""
        self._check_degree(p, carrier)
        if carrier is Carrier.INTERIOR:
            return self.inner.factors[p]
        return self.inner.boundary_factors[p]

    def interior_factor(self, p: int) -> np.ndarray:
        """Cholesky factor of the mass matrix restricted to interior p-simplices."""
        if p not in self._interior_factors:
            inside = self.interior_dofs(p)
            self._interior_factors[p] = cholesky_lower(
                self.inner.mass[p][np.ix_(inside, inside)], what=f"interior {p}-form mass"
            )
        return self._interior_factors[p]

    def incidence(self, p: int, carrier: Carrier = Carrier.INTERIOR) -> np.ndarray:
        """Dense coboundary matrix from p- to (p+1)-cochains (zero rows in top degree)."""
        self._check_degree(p, carrier)
        matrices = self._incidence if carrier is Carrier.INTERIOR else self._boundary_incidence
        if p == self._top_degree(carrier):
            return np.zeros((0, self.size(p, carrier)))
        return matrices[p]

    def tangential_matrix(self, p: int) -> np.ndarray:
        self._check_degree(p, Carrier.INTERIOR)
        return self.traces.tangential[p]

    def normal_matrix(self, p: int) -> np.ndarray:
        self._check_degree(p, Carrier.INTERIOR)
        return self.traces.normal[p]

    def extension_matrix(self, p: int) -> np.ndarray:
        """Right inverse of the tangential trace: zero extension off the boundary."""
        return self.tangential_matrix(p).T

    def whitened_d(self, p: int) -> np.ndarray:
        """``L_{p+1}^T D_p L_p^-T``: d in coordinates where both mass matrices are identity."""
        d = self.incidence(p)
        if d.shape[0] == 0:
            return d
        return self.factor(p + 1).T @ solve_lower(self.factor(p), d.T).T

    def delta_matrix(self, p: int) -> np.ndarray:
        """Matrix of delta from p- to (p-1)-cochains, zero on boundary (p-1)-simplices."""
        self._check_degree(p, Carrier.INTERIOR)
        size = self.size(p - 1)
        out = np.zeros((size, self.size(p)))
        if p == 0:
            return out
        inside = self.interior_dofs(p - 1)
        if inside.size:
            weak = self.incidence(p - 1).T @ self.inner.mass[p]
            out[inside] = cholesky_solve(self.interior_factor(p - 1), weak[inside])
        return out

    # ----- operations --------------------------------------------------------------

    def d(self, p: int, omega: Cochain) -> Cochain:
        """Exterior derivative of a p-cochain on its own carrier."""
        self._expect(omega, p)
        if p == self._top_degree(omega.carrier):
            raise DegreeError(f"d is not defined on top-degree {omega.carrier.value} cochains")
        return Cochain(p + 1, omega.carrier, self.incidence(p, omega.carrier) @ omega.values)

    def delta(self, p: int, omega: Cochain) -> Cochain:
        """Codifferential with vanishing boundary values, so that delta delta = 0.

        Raises:
            DegreeError: For p = 0, boundary cochains or a degree mismatch
        """
        self._expect(omega, p, Carrier.INTERIOR)
        if p == 0:
            raise DegreeError("delta is not defined on 0-forms")
        return Cochain(p - 1, Carrier.INTERIOR, self.delta_matrix(p) @ omega.values)

    def inner_product(self, a: Cochain, b: Cochain) -> float:
        """L2 inner product of the Whitney forms of two cochains."""
        a._check_compatible(b)
        return float(a.values @ self.mass(a.degree, a.carrier) @ b.values)

    def norm(self, omega: Cochain) -> float:
        return float(np.sqrt(max(self.inner_product(omega, omega), 0.0)))

    def tangential_trace(self, omega: Cochain) -> Cochain:
        """Pullback of an interior p-cochain to the boundary."""
        self._expect(omega, omega.degree, Carrier.INTERIOR)
        self._require_boundary()
        p = omega.degree
        if p == self.dim:
            raise DegreeError("the tangential trace of a top-degree form vanishes identically")
        return Cochain(p, Carrier.BOUNDARY, self.traces.tangential[p] @ omega.values)

    def extend(self, phi: Cochain) -> Cochain:
        """Zero extension of a boundary cochain into the interior."""
        self._expect(phi, phi.degree, Carrier.BOUNDARY)
        return Cochain(phi.degree, Carrier.INTERIOR, self.extension_matrix(phi.degree) @ phi.values)

    def normal_trace(self, omega: Cochain) -> Cochain:
        """Riesz representative on the boundary of the normal trace of a p-form, p >= 1."""
        self._expect(omega, omega.degree, Carrier.INTERIOR)
        self._require_boundary()
        p = omega.degree
        if p == 0:
            raise DegreeError("the normal trace of a 0-form is not defined")
        return Cochain(p - 1, Carrier.BOUNDARY, self.traces.normal[p] @ omega.values)

    def greens_residual(self, alpha: Cochain, beta: Cochain) -> float:
        """``<d alpha, beta> - <alpha, delta beta> - <t alpha, nu(beta)>_boundary``."""
        p = alpha.degree
        self._expect(alpha, p, Carrier.INTERIOR)
        self._expect(beta, p + 1, Carrier.INTERIOR)
        left = self.inner_product(self.d(p, alpha), beta)
        right = self.inner_product(alpha, self.delta(p + 1, beta))
        if self.is_closed:
            return left - right
        pairing = self.inner_product(self.tangential_trace(alpha), self.normal_trace(beta))
        return left - right - pairing

    def whiten(self, omega: Cochain) -> np.ndarray:
        """Coordinates ``L^T omega`` in which the mass inner product is Euclidean."""
        return self.factor(omega.degree, omega.carrier).T @ omega.values

    def unwhiten(self, p: int, y: np.ndarray, carrier: Carrier = Carrier.INTERIOR) -> np.ndarray:
        """Inverse of ``whiten`` applied to a vector or to the columns of a matrix."""
        return solve_lower_transpose(self.factor(p, carrier), y)

    def whitened_adjoint_rows(self, p: int) -> np.ndarray:
        """``L_{p-1}^-1 D_{p-1}^T L_p``: rows of the co-closedness condition in whitened form."""
        return solve_lower(self.factor(p - 1), self.incidence(p - 1).T @ self.factor(p))

    def wedge(self, alpha: Cochain, beta: Cochain) -> Cochain | None:
        """Galerkin projection of the wedge product of two Whitney forms.

        Returns:
            The (p+q)-cochain, or None when p+q exceeds the carrier dimension
            (the product is the zero form of a nonexistent degree)
        """
        from .wedge import wedge_product

        return wedge_product(self, alpha, beta)

    def wedge_pairing(self, p: int, carrier: Carrier = Carrier.BOUNDARY) -> np.ndarray:
        """``P[i, j]``: integral of the Whitney p-form i wedged with the complementary form j."""
        from .wedge import wedge_pairing

        return wedge_pairing(self, p, carrier)

    def riesz_matrix(self, p: int) -> np.ndarray:
        """Boundary (n-1-p)-cochains read as normal data, to Riesz p-cochains.

        The Riesz representative r of a form nu satisfies ``<chi, r> = integral of chi ^ nu``
        for every boundary p-cochain chi, the same pairing the normal trace obeys.
        """
        self._require_boundary()
        return cholesky_solve(self.factor(p, Carrier.BOUNDARY), self.wedge_pairing(p))

    # ----- helpers ------------------------------------------------------------------

    def _expect(self, omega: Cochain, p: int, carrier: Carrier | None = None) -> None:
        if omega.degree != p:
            raise DegreeError(f"expected a {p}-cochain, got degree {omega.degree}")
        if carrier is not None and omega.carrier is not carrier:
            raise DegreeError(f"expected a {carrier.value} cochain, got {omega.carrier.value}")
        self._check_degree(p, omega.carrier)
        if len(omega) != self.size(p, omega.carrier):
            raise DegreeError(
                f"{omega.carrier.value} {p}-cochain has {len(omega)} values, "
                f"expected {self.size(p, omega.carrier)}"
            )

    def _require_boundary(self) -> None:
        if self.is_closed:
            raise MeshValidationError("complex has no boundary", module="forms")
