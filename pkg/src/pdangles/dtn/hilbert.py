# this_file: src/pdangles/dtn/hilbert.py
"""The Hilbert transform ``T = d_boundary Lambda^-1``, its square and the operator G.

A boundary p-form psi is read as normal data for Lambda_{n-p-1}: its Riesz
representative comes from the exact wedge pairing on the boundary. The minimum-norm
preimage under Lambda_{n-p-1} is then differentiated along the boundary, so
``T_p`` maps boundary p-cochains to boundary (n-p)-cochains and ``T_{n-p} T_p`` is
T^2 on p-cochains. Identities that feed tangential data into T hold up to the
discretization of the Hodge star; on Riesz normal traces T is exact.

Signs follow the solver: the stated ones hold for the inward normal, and every
identity that is linear in Lambda flips with ``inward=False``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy import linalg

from ..errors import DegreeError
from ..forms.cochain import Carrier, Cochain
from ..forms.linalg import pseudo_inverse, range_basis
from ..hodge.decomposition import HodgeDecomposition
from ..hodge.subspaces import subspace_distance
from .operator import DtNSolver


def square_sign(n: int, p: int) -> float:
    """``(-1)^(np + n + p)``, the sign relating T^2 to the duality-angle cosines."""
    return -1.0 if (n * p + n + p) % 2 else 1.0


def g_sign(n: int, p: int) -> float:
    """``(-1)^(pn + p + n)``, the sign in front of the second term of G_p."""
    return square_sign(n, p)


@dataclass(frozen=True, eq=False)
class HilbertTransform:
    """T around boundary degree p (1 <= p <= n-1).

    ``forward`` is T_p on boundary p-cochains, ``backward`` is T_{n-p} on boundary
    (n-p)-cochains, and ``normal`` is T on Riesz (p-1)-cochains, the form in which
    normal traces are stored.
    """

    degree: int
    dim: int
    forward: np.ndarray
    backward: np.ndarray
    normal: np.ndarray
    pinv_rtol: float

    @property
    def squared(self) -> np.ndarray:
        """T^2 as a matrix on boundary p-cochains."""
        return self.backward @ self.forward

    def apply(self, psi: Cochain) -> Cochain:
        return Cochain(self.dim - self.degree, Carrier.BOUNDARY, self.forward @ psi.values)

    def apply_normal(self, nu: Cochain) -> Cochain:
        return Cochain(self.degree, Carrier.BOUNDARY, self.normal @ nu.values)


def _check_square_degree(solver: DtNSolver, p: int) -> None:
    if not 1 <= p <= solver.dim - 1:
        raise DegreeError(f"T needs 1 <= p <= {solver.dim - 1}, got {p}", module="dtn")


def tangential_transform(solver: DtNSolver, p: int) -> np.ndarray:
    """T_p: boundary p-cochains to boundary (n-p)-cochains, ``d Lambda_{n-p-1}^+ M^-1 P``."""
    _check_square_degree(solver, p)
    forms = solver.forms
    q = solver.dim - p - 1
    preimage = solver.flux_sign * (solver.stiffness_pinv(q) @ forms.wedge_pairing(q))
    return forms.incidence(q, Carrier.BOUNDARY) @ preimage


def normal_transform(solver: DtNSolver, p: int) -> np.ndarray:
    """T on Riesz (p-1)-cochains: ``d_boundary Lambda_{p-1}^+``."""
    _check_square_degree(solver, p)
    forms = solver.forms
    preimage = solver.flux_sign * (solver.stiffness_pinv(p - 1) @ forms.mass(p - 1, Carrier.BOUNDARY))
    return forms.incidence(p - 1, Carrier.BOUNDARY) @ preimage


def minimum_norm_transform(solver: DtNSolver, p: int) -> np.ndarray:
    """Reference for T on traces of harmonic Neumann fields, as Riesz (p-1)-cochains.

    For a closed p-form with trace psi, takes the normal trace of the closed form of
    least norm with that trace. On ``i*H^p_N`` this is the continuous ``T i*w``.
    """
    _check_square_degree(solver, p)
    forms = solver.forms
    n = solver.dim
    closed = solver.closed_forms(p)
    factor = forms.factor(p, Carrier.BOUNDARY)
    traces = factor.T @ (forms.tangential_matrix(p) @ closed)
    coefficients = pseudo_inverse(traces, solver.tolerances, what=f"closed {p}-form traces") @ factor.T
    sign = solver.flux_sign * (-1.0 if (p * (n - p)) % 2 else 1.0)
    return sign * (forms.normal_matrix(p) @ (closed @ coefficients))


def hilbert_transform(solver: DtNSolver, p: int) -> HilbertTransform:
    """Assemble T around boundary degree p."""
    _check_square_degree(solver, p)
    n = solver.dim

    def build() -> HilbertTransform:
        forward = tangential_transform(solver, p)
        backward = forward if 2 * p == n else tangential_transform(solver, n - p)
        return HilbertTransform(
            degree=p,
            dim=n,
            forward=forward,
            backward=backward,
            normal=normal_transform(solver, p),
            pinv_rtol=solver.tolerances.pinv_rtol,
        )

    return solver._memo(("hilbert", p), build)


def preimage_independence_residual(solver: DtNSolver, p: int, rng: np.random.Generator) -> float:
    """Change of ``d_boundary mu`` when a kernel element of Lambda_{p-1} is added to mu."""
    _check_square_degree(solver, p)
    forms = solver.forms
    kernel = solver.kernel(p - 1)
    if kernel.shape[1] == 0:
        return 0.0
    sigma = kernel @ rng.standard_normal(kernel.shape[1])
    shift = forms.cochain(p, forms.incidence(p - 1, Carrier.BOUNDARY) @ sigma, Carrier.BOUNDARY)
    return forms.norm(shift) / max(forms.norm(forms.cochain(p - 1, sigma, Carrier.BOUNDARY)), 1e-300)


@dataclass(frozen=True, eq=False)
class TSquaredSpectrum:
    """Eigenvalues of T^2 on traces of H^p_N matched against squared duality cosines."""

    degree: int
    sign: float
    eigenvalues: np.ndarray
    cosines_squared: np.ndarray
    matched: np.ndarray
    kernel_eigenvalues: np.ndarray
    sign_residual: float

    @property
    def discrepancies(self) -> np.ndarray:
        return np.abs(self.matched - self.cosines_squared)

    @property
    def max_discrepancy(self) -> float:
        return float(np.max(self.discrepancies, initial=0.0))

    @property
    def max_error(self) -> float:
        """Largest deviation from the limit: matched discrepancies and kernel eigenvalues."""
        return max(self.max_discrepancy, float(np.max(np.abs(self.kernel_eigenvalues), initial=0.0)))

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "sign": self.sign,
            "eigenvalues": self.eigenvalues.tolist(),
            "abs_eigenvalues": self.matched.tolist(),
            "cosines_squared": self.cosines_squared.tolist(),
            "discrepancies": self.discrepancies.tolist(),
            "max_discrepancy": self.max_discrepancy,
            "kernel_eigenvalues": self.kernel_eigenvalues.tolist(),
            "sign_residual": self.sign_residual,
        }


def neumann_trace_basis(solver: DtNSolver, p: int, neumann_columns: np.ndarray) -> np.ndarray:
    """Boundary-mass-orthonormal basis of the traces of the given Neumann fields."""
    forms = solver.forms
    factor = forms.factor(p, Carrier.BOUNDARY)
    traces = forms.tangential_matrix(p) @ np.asarray(neumann_columns, dtype=float).reshape(forms.size(p), -1)
    q = range_basis(factor.T @ traces, solver.tolerances, what=f"i*H^{p}_N", module="dtn")
    return forms.unwhiten(p, q, Carrier.BOUNDARY)


def t_squared(
    solver: DtNSolver, p: int, neumann_columns: np.ndarray, cosines: np.ndarray
) -> TSquaredSpectrum:
    """Spectrum of T^2 restricted to the traces of H^p_N.

    Args:
        solver: Dirichlet-to-Neumann solver of the mesh
        p: Degree, 1 <= p <= n-1
        neumann_columns: Basis of H^p_N as interior cochains
        cosines: Duality-angle cosines to match against

    Returns:
        Eigenvalues with the absolute values matched, in descending order, to the
        squared cosines; the remaining eigenvalues form the kernel part
    """
    _check_square_degree(solver, p)
    forms = solver.forms
    mass = forms.mass(p, Carrier.BOUNDARY)
    q = neumann_trace_basis(solver, p, neumann_columns)
    restricted = q.T @ mass @ hilbert_transform(solver, p).squared @ q
    eigenvalues = np.linalg.eigvals(restricted)
    imaginary = float(np.max(np.abs(eigenvalues.imag), initial=0.0))
    if imaginary > solver.tolerances.kernel_atol:
        logger.warning(f"T^2 eigenvalues carry imaginary parts up to {imaginary:.3e}")
    eigenvalues = np.real(eigenvalues)
    eigenvalues = eigenvalues[np.argsort(-np.abs(eigenvalues))]

    squared = np.sort(np.asarray(cosines, dtype=float) ** 2)[::-1]
    count = min(squared.size, eigenvalues.size)
    leading = eigenvalues[:count]
    sign = square_sign(solver.dim, p)
    spectrum = TSquaredSpectrum(
        degree=p,
        sign=sign,
        eigenvalues=eigenvalues,
        cosines_squared=squared[:count],
        matched=np.abs(leading),
        kernel_eigenvalues=eigenvalues[count:],
        sign_residual=float(np.max(np.abs(leading - sign * np.abs(leading)), initial=0.0)),
    )
    logger.info(f"T^2 on i*H^{p}_N: max discrepancy {spectrum.max_discrepancy:.3e}")
    return spectrum


def smooth_boundary_modes(solver: DtNSolver, p: int, modes: int) -> np.ndarray:
    """The ``modes`` lowest non-closed eigenvectors of the boundary Laplacian on p-cochains.

    Solves ``d^T M d v = mu M v`` on the boundary complex and skips the closed forms
    (mu = 0); columns are boundary-mass-orthonormal.
    """
    forms = solver.forms
    mass = forms.mass(p, Carrier.BOUNDARY)
    d = forms.incidence(p, Carrier.BOUNDARY)
    if d.shape[0] == 0:
        return np.zeros((mass.shape[0], 0))
    energy = d.T @ forms.mass(p + 1, Carrier.BOUNDARY) @ d
    values, vectors = linalg.eigh(energy, mass)
    cutoff = solver.tolerances.null_rtol * max(float(values[-1]), 1e-300)
    keep = np.flatnonzero(values > cutoff)[:modes]
    return vectors[:, keep]


def smooth_exact_fields(solver: DtNSolver, p: int, modes: int = 4) -> np.ndarray:
    """Exact harmonic p-fields ``d w`` whose traces are the smoothest exact boundary forms.

    ``w`` solves the boundary value problem for the lowest boundary (p-1)-modes. The
    trace of ``d w`` equals the trace of its exact-coexact part, because the rest is
    an exact Dirichlet field.
    """
    _check_square_degree(solver, p)
    data = smooth_boundary_modes(solver, p - 1, modes)
    omega, _ = solver.solve_bvp_matrix(p - 1, data)
    return solver.forms.incidence(p - 1) @ omega


def exact_coexact_residual(solver: DtNSolver, p: int, ece_columns: np.ndarray) -> float:
    """Largest relative deviation of T^2 from ``(-1)^(np+n+p)`` times identity on i*EcE^p."""
    _check_square_degree(solver, p)
    forms = solver.forms
    traces = forms.tangential_matrix(p) @ ece_columns
    if traces.shape[1] == 0:
        return 0.0
    mass = forms.mass(p, Carrier.BOUNDARY)
    image = hilbert_transform(solver, p).squared @ traces
    miss = image - square_sign(solver.dim, p) * traces
    worst = 0.0
    for i in range(traces.shape[1]):
        scale = np.sqrt(max(traces[:, i] @ mass @ traces[:, i], 1e-300))
        worst = max(worst, float(np.sqrt(max(miss[:, i] @ mass @ miss[:, i], 0.0)) / scale))
    return worst


# ----- G -------------------------------------------------------------------------------


def g_operator(solver: DtNSolver, p: int) -> np.ndarray:
    """``G_p = Lambda_p + (-1)^(pn+p+n) d_boundary Lambda_{n-p-2}^+ d_boundary``.

    Maps boundary p-cochains to Riesz p-cochains, like Lambda_p. The second term is
    ``T_{p+1} d_boundary``, brought to Riesz form; it is absent for p = n-1.
    """
    solver._check(p)
    forms = solver.forms
    n = solver.dim
    lam = solver.operator(p).matrix
    if p == n - 1:
        return lam
    correction = forms.riesz_matrix(p) @ tangential_transform(solver, p + 1) @ forms.incidence(
        p, Carrier.BOUNDARY
    )
    return lam + g_sign(n, p) * correction


def _whitened_top_subspace(solver: DtNSolver, p: int, image: np.ndarray, k: int) -> np.ndarray:
    forms = solver.forms
    if k == 0 or image.shape[1] == 0:
        return np.zeros((image.shape[0], 0))
    u, _, _ = linalg.svd(forms.factor(p, Carrier.BOUNDARY).T @ image, full_matrices=False)
    return forms.unwhiten(p, u[:, :k], Carrier.BOUNDARY)


def g_target(solver: DtNSolver, p: int, neumann_columns: np.ndarray) -> np.ndarray:
    """Riesz form of ``i*H^{n-p-1}_N``: where im G_p should lie."""
    forms = solver.forms
    q = solver.dim - 1 - p
    traces = neumann_trace_basis(solver, q, neumann_columns)
    riesz = forms.riesz_matrix(p) @ traces
    factor = forms.factor(p, Carrier.BOUNDARY)
    return forms.unwhiten(
        p, range_basis(factor.T @ riesz, solver.tolerances, what=f"Riesz i*H^{q}_N", module="dtn"),
        Carrier.BOUNDARY,
    )


def g_test_data(solver: DtNSolver, p: int, modes: int = 4) -> np.ndarray:
    """Closed boundary p-forms plus the smoothest non-closed modes; the whole space in top degree."""
    forms = solver.forms
    size = forms.size(p, Carrier.BOUNDARY)
    if p == solver.dim - 1:
        return np.eye(size)
    whitened_d = forms.incidence(p, Carrier.BOUNDARY) @ forms.unwhiten(p, np.eye(size), Carrier.BOUNDARY)
    closed = forms.unwhiten(p, linalg.null_space(whitened_d), Carrier.BOUNDARY)
    return np.hstack([closed, smooth_boundary_modes(solver, p, modes)])


def g_image(solver: DtNSolver, p: int, expected_rank: int, modes: int = 4) -> np.ndarray:
    """Boundary-mass-orthonormal basis of the dominant image of G_p on smooth data."""
    image = g_operator(solver, p) @ g_test_data(solver, p, modes)
    return _whitened_top_subspace(solver, p, image, expected_rank)


def _frobenius(columns: np.ndarray, mass: np.ndarray) -> float:
    return float(np.sqrt(max(float(np.trace(columns.T @ mass @ columns)), 0.0)))


def g_image_report(solver: DtNSolver, p: int, neumann_columns: np.ndarray, modes: int = 4) -> dict:
    """Distance of im G_p from the Riesz form of ``i*H^{n-p-1}_N``.

    ``leakage`` is the part of G on the test data outside the target, relative to
    Lambda on the same data; it vanishes in top degree and shrinks with the mesh size
    elsewhere.
    """
    forms = solver.forms
    mass = forms.mass(p, Carrier.BOUNDARY)
    target = g_target(solver, p, neumann_columns)
    data = g_test_data(solver, p, modes)
    image = g_operator(solver, p) @ data
    outside = image - target @ (target.T @ (mass @ image))
    reference = solver.operator(p).matrix @ data
    leakage = _frobenius(outside, mass) / max(_frobenius(reference, mass), 1e-300)
    distance = subspace_distance(_whitened_top_subspace(solver, p, image, target.shape[1]), target, mass)
    return {"degree": p, "expected_rank": target.shape[1], "distance": distance, "leakage": leakage}


# ----- projection identities -----------------------------------------------------------


def t_projection_residual(solver: DtNSolver, omega: Cochain) -> float:
    """``||T i*w - R(i*w)|| / ||w||`` for a harmonic Neumann field w.

    Both sides are Riesz (p-1)-cochains and R is ``minimum_norm_transform``. The
    agreement is up to the discretization of the Hodge star.
    """
    p = omega.degree
    forms = solver.forms
    trace = forms.tangential_matrix(p) @ omega.values
    left = forms.riesz_matrix(p - 1) @ (hilbert_transform(solver, p).forward @ trace)
    right = minimum_norm_transform(solver, p) @ trace
    miss = forms.cochain(p - 1, left - right, Carrier.BOUNDARY)
    return forms.norm(miss) / max(forms.norm(omega), 1e-300)


def t_projection_reference_residual(solver: DtNSolver, hodge: HodgeDecomposition, omega: Cochain) -> float:
    """``||R(i*w) - s (-1)^(p(n-p)+1) nu(P_D w)|| / ||w||`` for a harmonic Neumann field w.

    ``s`` is the solver's flux sign and nu the outward normal trace of the forms
    layer; for n = 2 and the inward normal the sign is ``(-1)^(np+1)``. Exact: the
    least-norm closed form with trace ``i*w`` is ``w - P_D w``.
    """
    p = omega.degree
    n = solver.dim
    forms = solver.forms
    left = minimum_norm_transform(solver, p) @ (forms.tangential_matrix(p) @ omega.values)
    sign = solver.flux_sign * (1.0 if (p * (n - p)) % 2 else -1.0)
    right = sign * (forms.normal_matrix(p) @ hodge.project_dirichlet(omega).values)
    miss = forms.cochain(p - 1, left - right, Carrier.BOUNDARY)
    return forms.norm(miss) / max(forms.norm(omega), 1e-300)


def t_projection_dirichlet_residual(
    solver: DtNSolver, hodge: HodgeDecomposition, lam: Cochain
) -> float:
    """``||T nu(l) + s i*P_N l|| / ||l||`` for a harmonic Dirichlet field l.

    With the inward normal (``s = -1``) this is ``T nu(l) = (-1)^(n+p+1) i*P_N l`` for
    n = 2. Exact: T acts on a normal trace.
    """
    p = lam.degree
    forms = solver.forms
    left = hilbert_transform(solver, p).normal @ (forms.normal_matrix(p) @ lam.values)
    right = -solver.flux_sign * (forms.tangential_matrix(p) @ hodge.project_neumann(lam).values)
    miss = forms.cochain(p, left - right, Carrier.BOUNDARY)
    return forms.norm(miss) / max(forms.norm(lam), 1e-300)
