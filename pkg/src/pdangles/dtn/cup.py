# this_file: src/pdangles/dtn/cup.py
"""Reconstruction of the mixed cup product from boundary data.

For a Neumann field a of degree p and a Dirichlet field b of degree q, the normal
trace of the Dirichlet-harmonic part of ``a ^ b`` is compared with
``(-1)^p Lambda(i*a ^ Lambda^-1 i*(star b))``. The identity holds when b lies in the
boundary subspace; elsewhere the residual is reported only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger

from ..errors import DegreeError
from ..forms.cochain import Carrier, Cochain
from ..hodge.decomposition import HodgeDecomposition
from .operator import DtNSolver


@dataclass(frozen=True, eq=False)
class CupProductResult:
    """Both sides of the reconstruction, as Riesz (p+q-1)-cochains on the boundary."""

    p: int
    q: int
    reconstructed: Cochain | None
    direct: Cochain | None
    residual: float
    image_residual: float

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "residual": self.residual,
            "image_residual": self.image_residual,
        }


def _relative(forms, a: Cochain, b: Cochain) -> float:
    return forms.norm(a - b) / max(forms.norm(b), forms.norm(a), 1e-300)


def cup_product_reconstruct(
    solver: DtNSolver, hodge: HodgeDecomposition, alpha: Cochain, beta: Cochain
) -> CupProductResult:
    """Evaluate both sides of the reconstruction formula.

    Args:
        solver: Dirichlet-to-Neumann solver of the mesh
        hodge: Decomposition of the same mesh (for the Dirichlet projection)
        alpha: Harmonic Neumann p-field
        beta: Harmonic Dirichlet q-field, q >= 1

    Returns:
        CupProductResult; both sides are None when p + q exceeds the dimension
    """
    forms = solver.forms
    p, q = alpha.degree, beta.degree
    forms._expect(alpha, p, Carrier.INTERIOR)
    forms._expect(beta, q, Carrier.INTERIOR)
    if p + q > forms.dim:
        return CupProductResult(p, q, None, None, 0.0, 0.0)
    if q < 1 or p > forms.dim - 1:
        raise DegreeError(f"cup product reconstruction needs q >= 1 and p < n, got ({p}, {q})", module="dtn")

    # Direct side: Dirichlet-harmonic part of a ^ b, then its normal trace.
    product = forms.wedge(alpha, beta)
    eta = hodge.project_dirichlet(product)
    direct = forms.normal_trace(eta)

    # Boundary side.
    phi = forms.tangential_trace(alpha)
    psi = forms.normal_trace(beta)
    mu_values, image_residual = solver.lambda_pinv(q - 1, psi.values)
    mu = Cochain(q - 1, Carrier.BOUNDARY, mu_values)
    boundary_product = forms.wedge(phi, mu)
    sign = -1.0 if p % 2 else 1.0
    reconstructed = sign * solver.lambda_(p + q - 1, boundary_product)

    residual = _relative(forms, reconstructed, direct)
    logger.debug(f"cup product ({p}, {q}): residual {residual:.3e}, image residual {image_residual:.3e}")
    return CupProductResult(p, q, reconstructed, direct, residual, image_residual)


def well_definedness_residual(
    solver: DtNSolver, phi: Cochain, mu: Cochain, sigma: Cochain
) -> float:
    """``||Lambda(phi ^ (mu + s)) - Lambda(phi ^ mu)||`` relative to ``||Lambda(phi ^ mu)||``.

    ``sigma`` should lie in ker Lambda_{q-1}; the shift then changes nothing.
    """
    forms = solver.forms
    degree = phi.degree + mu.degree
    base = solver.lambda_(degree, forms.wedge(phi, mu))
    shifted = solver.lambda_(degree, forms.wedge(phi, mu + sigma))
    scale = max(forms.norm(base), forms.norm(phi) * forms.norm(sigma), 1e-300)
    return forms.norm(shifted - base) / scale


def mixed_primitives_residual(
    solver: DtNSolver, boundary_field: Cochain, rng: np.random.Generator
) -> float:
    """Check ``Lambda i*g = s nu(b)`` for a randomized primitive g of ``b + d e``.

    ``s`` is the solver's flux sign and nu the outward normal trace.

    Args:
        solver: Dirichlet-to-Neumann solver of the mesh
        boundary_field: Element b of the boundary subspace of H^m_D, m >= 1
        rng: Source of the Dirichlet shift e and the closed shift added to g
    """
    forms = solver.forms
    m = boundary_field.degree
    if m < 1:
        raise DegreeError("primitives need degree at least 1", module="dtn")
    d = forms.incidence(m - 1)
    epsilon = np.zeros(forms.size(m - 1))
    inside = forms.interior_dofs(m - 1)
    epsilon[inside] = rng.standard_normal(inside.size)
    target = boundary_field.values + d @ epsilon
    gamma = np.linalg.lstsq(d, target, rcond=None)[0]
    closed = solver.closed_forms(m - 1)
    gamma = gamma + closed @ rng.standard_normal(closed.shape[1])

    primitive = forms.cochain(m - 1, gamma)
    left = solver.lambda_(m - 1, forms.tangential_trace(primitive))
    right = forms.normal_trace(boundary_field) * solver.flux_sign
    return forms.norm(left - right) / max(forms.norm(right), 1e-300)


def off_boundary_residuals(
    solver: DtNSolver, hodge: HodgeDecomposition, p: int, q: int
) -> list[CupProductResult]:
    """Evaluate the reconstruction on the interior subspace of H^q_D, where it is not asserted."""
    neumann = hodge.harmonic_neumann_fields(p)
    _, interior_d = hodge.interior_boundary_split_D(q)
    results = [
        cup_product_reconstruct(solver, hodge, alpha, beta)
        for alpha in neumann.cochains()
        for beta in interior_d.cochains()
    ]
    if results:
        worst = max(r.residual for r in results)
        logger.info(f"reconstruction off the boundary subspace ({p}, {q}): worst residual {worst:.3e}")
    return results
