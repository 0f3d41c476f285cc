# this_file: src/pdangles/dtn/report.py
"""JSON-ready summary of the boundary pipeline for one degree."""

from __future__ import annotations

import numpy as np
from loguru import logger

from ..forms.cochain import Carrier
from ..hodge.decomposition import HodgeDecomposition
from .cup import cup_product_reconstruct, mixed_primitives_residual, off_boundary_residuals
from .hilbert import (
    exact_coexact_residual,
    g_image_report,
    preimage_independence_residual,
    smooth_exact_fields,
    t_projection_dirichlet_residual,
    t_projection_reference_residual,
    t_projection_residual,
    t_squared,
)
from .operator import DtNSolver


def dtn_report(solver: DtNSolver, hodge: HodgeDecomposition, p: int, seed: int = 0) -> dict:
    """Collect every boundary-side quantity for degree p.

    Args:
        solver: Dirichlet-to-Neumann solver of the mesh
        hodge: Decomposition of the same mesh, used for the matched angle cosines
        p: Boundary degree, 0 <= p <= n-1
        seed: Seed of the random test vectors

    Returns:
        Dictionary with Lambda ranks and kernels, the T^2 spectrum against the
        duality-angle cosines, G and cup-product residuals. The T^2 spectrum, the
        exact-coexact square, ``t_projection`` and the G leakage converge with the
        mesh; the other residuals sit at round-off
    """
    solver._check(p)
    rng = np.random.default_rng(seed)
    forms = solver.forms
    n = forms.dim
    operator = solver.operator(p)
    boundary_n, _ = hodge.interior_boundary_split_N(p)
    boundary_d, _ = hodge.interior_boundary_split_D(p)
    decomposition = solver.kernel_decomposition(p, boundary_n.columns)

    report: dict = {
        "degree": p,
        "dimension": n,
        "boundary_size": forms.size(p, Carrier.BOUNDARY),
        "inward": solver.inward,
        "lambda": {
            "rank": solver.rank(p),
            "kernel_dim": decomposition.kernel_dim,
            "image_dim": solver.harmonic_trace_image(p).shape[1],
            "asymmetry": operator.asymmetry,
            "bvp": operator.diagnostics.to_dict(),
            "kernel_image_distance": solver.kernel_image_distance(p),
            "exact_annihilation": solver.exact_annihilation_residual(p, rng),
        },
        "kernel_decomposition": decomposition.to_dict(),
        "g_operator": g_image_report(solver, p, hodge.harmonic_neumann_fields(n - 1 - p).columns),
    }

    if 1 <= p <= n - 1:
        neumann = hodge.harmonic_neumann_fields(p)
        angles = hodge.poincare_duality_angles(p)
        spectrum = t_squared(solver, p, neumann.columns, angles.cosines)
        report["t_squared"] = spectrum.to_dict()
        report["duality_cosines"] = angles.cosines.tolist()
        report["exact_coexact"] = exact_coexact_residual(solver, p, smooth_exact_fields(solver, p))
        report["preimage_independence"] = preimage_independence_residual(solver, p, rng)
        report["t_projection"] = max(
            (t_projection_residual(solver, omega) for omega in neumann.cochains()), default=0.0
        )
        report["t_projection_reference"] = max(
            (t_projection_reference_residual(solver, hodge, omega) for omega in neumann.cochains()),
            default=0.0,
        )
        report["t_projection_dirichlet"] = max(
            (
                t_projection_dirichlet_residual(solver, hodge, lam)
                for lam in hodge.harmonic_dirichlet_fields(p).cochains()
            ),
            default=0.0,
        )

    if p >= 1:
        report["mixed_primitives"] = max(
            (mixed_primitives_residual(solver, beta, rng) for beta in boundary_d.cochains()), default=0.0
        )

    cup = []
    for q in range(1, n - p + 1):
        boundary_q, _ = hodge.interior_boundary_split_D(q)
        for alpha in hodge.harmonic_neumann_fields(p).cochains():
            for beta in boundary_q.cochains():
                cup.append(cup_product_reconstruct(solver, hodge, alpha, beta).to_dict() | {"boundary_subspace": True})
        cup.extend(r.to_dict() | {"boundary_subspace": False} for r in off_boundary_residuals(solver, hodge, p, q))
    report["cup_products"] = cup
    logger.info(f"DtN report for degree {p} complete")
    return report
