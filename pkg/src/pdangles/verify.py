# this_file: src/pdangles/verify.py
"""Acceptance battery: every invariant of both pipelines with its residual."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from loguru import logger

from .cohom1 import (
    Family,
    FamilyParams,
    Role,
    asymptotic_exponent,
    closed_form_angle,
    default_radii,
    numeric_angle,
    ode_residual,
    parameter_grid,
    profile_error,
    solve_radial,
    sweep,
    weighted_l2,
)
from .config import DEFAULT_TOLERANCES, Tolerances
from .dtn import (
    DtNSolver,
    cup_product_reconstruct,
    exact_coexact_residual,
    g_image_report,
    mixed_primitives_residual,
    smooth_exact_fields,
    t_projection_dirichlet_residual,
    t_projection_reference_residual,
    t_projection_residual,
    t_squared,
)
from .errors import InvariantError, ParameterError
from .forms import DiscreteForms
from .hodge import HodgeDecomposition
from .mesh import GeneratorSpec, betti_numbers, relative_betti_numbers

CHECK_COLUMNS = ("suite", "name", "residual", "tolerance", "passed")


class Suite(Enum):
    ALL = "all"
    COHOM1 = "cohom1"
    MESH = "mesh"

    @classmethod
    def from_string(cls, value: str) -> Suite:
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(s.value for s in cls)
            raise ParameterError(f"unknown suite '{value}' (choose from {choices})", module="verify") from None


@dataclass(frozen=True)
class Check:
    """One invariant: its residual, the bound it must stay under, and context."""

    suite: str
    name: str
    residual: float
    tolerance: float
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return math.isfinite(self.residual) and self.residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            **({"detail": self.detail} if self.detail else {}),
        }


@dataclass
class VerifyReport:
    suite: Suite
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]

    def raise_for_failures(self) -> None:
        if self.failures:
            names = ", ".join(f"{c.suite}/{c.name}" for c in self.failures)
            raise InvariantError(f"{len(self.failures)} invariant(s) failed: {names}")

    def to_dict(self) -> dict:
        return {
            "suite": self.suite.value,
            "passed": self.passed,
            "count": len(self.checks),
            "failures": [f"{c.suite}/{c.name}" for c in self.failures],
            "checks": [check.to_dict() for check in self.checks],
        }


def _worst(values: Iterable[float]) -> float:
    return float(max(values, default=0.0))


# ----- cohomogeneity-one battery ---------------------------------------------------


def cohom1_checks(tolerances: Tolerances = DEFAULT_TOLERANCES, workers: int | None = None) -> list[Check]:
    """Closed forms, the shooting route, lens m-independence and the decay exponents."""
    checks: list[Check] = []

    def add(name: str, residual: float, tolerance: float, **detail) -> None:
        checks.append(Check("cohom1", name, float(residual), tolerance, detail))
        logger.debug(f"cohom1/{name}: {residual:.3e} (tolerance {tolerance:.1e})")

    # S^2 x S^2 complement: cos = (1 - sin^2 r) / (1 + sin^2 r).
    radii = np.linspace(0.02, math.pi / 2 - 0.02, 50)
    reference = (1 - np.sin(radii) ** 2) / (1 + np.sin(radii) ** 2)
    grassmann = [FamilyParams(Family.GRASSMANN, 2, 1, float(r)) for r in radii]
    add(
        "grassmann_2_closed_form",
        np.max(np.abs([closed_form_angle(p).cos_theta for p in grassmann] - reference)),
        1e-12,
    )
    add(
        "grassmann_2_numeric",
        np.max(np.abs([numeric_angle(p, tolerances).cos_theta for p in grassmann] - reference)),
        1e-8,
    )

    grid = parameter_grid([Family.CPN, Family.GRASSMANN], range(2, 7), [0.1, 0.3, 0.7, 1.2])
    rows = sweep(grid, tolerances, workers)
    add("cross_route_grid", _worst(row["abs_diff"] for row in rows), 1e-8, tuples=len(rows))

    lens = [numeric_angle(FamilyParams(Family.LENS, 3, 1, 0.5, m), tolerances).cos_theta for m in (1, 2, 3, 5, 10)]
    add("lens_m_independence", max(lens) - min(lens), 1e-10)

    fits = [
        asymptotic_exponent(family, n, k, default_radii(), np.geomspace(1e-3, 1e-2, 6))
        for family in (Family.CPN, Family.GRASSMANN)
        for n in (2, 3, 4)
        for k in range(1, n)
    ]
    add("small_radius_exponent", _worst(fit.rel_err for fit in fits), 0.02)
    add("closing_exponent", _worst(abs(fit.closing_slope - 2.0) / 2.0 for fit in fits), 0.02)

    sweep_radii = np.linspace(0.05, math.pi / 2 - 0.01, 200)
    worst_step = -math.inf
    asymmetry = 0.0
    for family in (Family.CPN, Family.GRASSMANN):
        for n in range(2, 5):
            for k in range(1, n):
                cosines = np.array([closed_form_angle(FamilyParams(family, n, k, float(r))).cos_theta for r in sweep_radii])
                worst_step = max(worst_step, float(np.max(np.diff(cosines))))
                mirrored = np.array(
                    [closed_form_angle(FamilyParams(family, n, n - k, float(r))).cos_theta for r in sweep_radii]
                )
                asymmetry = max(asymmetry, float(np.max(np.abs(cosines - mirrored))))
    add("monotone_in_r", max(worst_step, 0.0), 0.0, largest_step=worst_step)
    add("k_symmetry", asymmetry, 1e-14)

    samples = [
        FamilyParams(Family.CPN, 2, 1, 0.3),
        FamilyParams(Family.CPN, 4, 1, 0.7),
        FamilyParams(Family.GRASSMANN, 3, 1, 0.3),
        FamilyParams(Family.GRASSMANN, 5, 2, 1.2),
    ]
    residuals, profiles, norms = [], [], []
    for params in samples:
        for role in Role:
            solution = solve_radial(params, role, tolerances)
            residuals.append(ode_residual(solution))
            profiles.append(profile_error(solution, tolerances))
            norms.append(abs(weighted_l2(params, solution, solution, tolerances) - 1.0))
    add("ode_residual", _worst(residuals), 1e-9)
    add("profile_vs_closed_form", _worst(profiles), 1e-8)
    add("unit_norm", _worst(norms), 1e-9)
    return checks


# ----- mesh battery ----------------------------------------------------------------


def _pipeline(spec: GeneratorSpec, tolerances: Tolerances) -> tuple[DiscreteForms, HodgeDecomposition]:
    complex_, geometry = spec.build()
    forms = DiscreteForms(complex_, geometry, tolerances)
    return forms, HodgeDecomposition(forms)


def greens_battery(forms: DiscreteForms, rng: np.random.Generator, pairs: int = 200) -> float:
    """Largest scaled Green's-formula residual over random pairs in every degree."""
    worst = 0.0
    for i in range(pairs):
        p = i % forms.dim
        alpha = forms.random(p, rng)
        beta = forms.random(p + 1, rng)
        scale = forms.norm(forms.d(p, alpha)) * forms.norm(beta) + forms.norm(alpha) * forms.norm(
            forms.delta(p + 1, beta)
        )
        worst = max(worst, abs(forms.greens_residual(alpha, beta)) / max(scale, 1e-300))
    return worst


def cup_refinement(
    specs: Iterable[GeneratorSpec], tolerances: Tolerances, p: int = 1, q: int = 1
) -> list[float]:
    """Worst cup-product residual over Neumann p-fields and boundary Dirichlet q-fields, per mesh."""
    result = []
    for spec in specs:
        forms, hodge = _pipeline(spec, tolerances)
        solver = DtNSolver(forms)
        boundary_d, _ = hodge.interior_boundary_split_D(q)
        residuals = [
            cup_product_reconstruct(solver, hodge, alpha, beta).residual
            for alpha in hodge.harmonic_neumann_fields(p).cochains()
            for beta in boundary_d.cochains()
        ]
        result.append(_worst(residuals))
    return result


def discretization_errors(spec: GeneratorSpec, tolerances: Tolerances) -> dict[str, float]:
    """Residuals of the identities that hold only in the limit, on one mesh (n = 2)."""
    forms, hodge = _pipeline(spec, tolerances)
    solver = DtNSolver(forms)
    neumann = hodge.harmonic_neumann_fields(1)
    spectrum = t_squared(solver, 1, neumann.columns, hodge.poincare_duality_angles(1).cosines)
    return {
        "t_squared_spectrum": spectrum.max_error,
        "exact_coexact_square": exact_coexact_residual(solver, 1, smooth_exact_fields(solver, 1)),
        "t_projection": _worst(t_projection_residual(solver, omega) for omega in neumann.cochains()),
        "g_leakage": g_image_report(solver, 0, neumann.columns)["leakage"],
    }


def _refinement_ratio(coarse: float, fine: float, floor: float = 1e-9) -> float:
    # A fine level at round-off counts as converged.
    return 0.0 if fine <= floor else fine / max(coarse, 1e-300)


def mesh_checks(tolerances: Tolerances = DEFAULT_TOLERANCES, seed: int = 0) -> list[Check]:
    """Discrete Hodge dimensions, orthogonality, Green's formula and the boundary pipeline.

    Identities that hold on every mesh are checked against round-off tolerances; those
    that feed tangential data through the discrete Hodge star must shrink under one
    uniform refinement.
    """
    checks: list[Check] = []
    rng = np.random.default_rng(seed)

    def add(name: str, residual: float, tolerance: float, **detail) -> None:
        checks.append(Check("mesh", name, float(residual), tolerance, detail))
        logger.debug(f"mesh/{name}: {residual:.3e} (tolerance {tolerance:.1e})")

    meshes = {
        "annulus": (GeneratorSpec("annulus"), (0, 1)),
        "punctured_torus": (GeneratorSpec("punctured-torus", {"divisions": 8, "hole": 2}), (2, 0)),
    }
    for label, (spec, (interior_dim, boundary_dim)) in meshes.items():
        forms, hodge = _pipeline(spec, tolerances)
        n = forms.dim
        betti = betti_numbers(forms.complex)
        relative = relative_betti_numbers(forms.complex)
        mismatch = sum(
            abs(hodge.harmonic_neumann_fields(p).dimension - betti[p])
            + abs(hodge.harmonic_dirichlet_fields(p).dimension - relative[p])
            for p in range(n + 1)
        )
        add(f"{label}/betti_dimensions", mismatch, 0.0, betti=list(betti), relative_betti=list(relative))
        boundary_n, interior_n = hodge.interior_boundary_split_N(1)
        split_mismatch = abs(interior_n.dimension - interior_dim) + abs(boundary_n.dimension - boundary_dim)
        add(f"{label}/split_dimensions", split_mismatch, 0.0, interior=interior_n.dimension, boundary=boundary_n.dimension)
        add(f"{label}/greens_formula", greens_battery(forms, rng), 1e-10)
        add(
            f"{label}/orthogonality",
            _worst(_worst(hodge.orthogonality_residuals(p, rng).values()) for p in range(n + 1)),
            1e-9,
        )

        solver = DtNSolver(forms)
        add(f"{label}/exact_annihilation", _worst(solver.exact_annihilation_residual(p, rng) for p in range(n)), 1e-8)
        add(f"{label}/kernel_image", _worst(solver.kernel_image_distance(p) for p in range(n)), 1e-7)
        top = g_image_report(solver, n - 1, hodge.harmonic_neumann_fields(0).columns)
        add(f"{label}/g_top_degree_image", max(top["distance"], top["leakage"]), 1e-7)
        for p in range(1, n):
            add(
                f"{label}/t_projection_reference_{p}",
                _worst(
                    t_projection_reference_residual(solver, hodge, omega)
                    for omega in hodge.harmonic_neumann_fields(p).cochains()
                ),
                1e-8,
            )
            add(
                f"{label}/t_projection_dirichlet_{p}",
                _worst(
                    t_projection_dirichlet_residual(solver, hodge, lam)
                    for lam in hodge.harmonic_dirichlet_fields(p).cochains()
                ),
                1e-6,
            )
        for p in range(1, n + 1):
            boundary_d, _ = hodge.interior_boundary_split_D(p)
            add(
                f"{label}/mixed_primitives_{p}",
                _worst(mixed_primitives_residual(solver, beta, rng) for beta in boundary_d.cochains()),
                1e-6,
            )

    levels = {
        "annulus": (
            GeneratorSpec("annulus", {"n_radial": 2, "n_angular": 12}),
            GeneratorSpec("annulus", {"n_radial": 4, "n_angular": 24}),
        ),
        "punctured_torus": (
            GeneratorSpec("punctured-torus", {"divisions": 8, "hole": 2}),
            GeneratorSpec("punctured-torus", {"divisions": 16, "hole": 4}),
        ),
    }
    for label, (coarse_spec, fine_spec) in levels.items():
        coarse = discretization_errors(coarse_spec, tolerances)
        fine = discretization_errors(fine_spec, tolerances)
        for name in coarse:
            add(
                f"{label}/{name}_refinement",
                _refinement_ratio(coarse[name], fine[name]),
                0.95,
                coarse=coarse[name],
                fine=fine[name],
            )

    for p, q in ((0, 1), (1, 1)):
        residuals = cup_refinement(levels["annulus"], tolerances, p, q)
        add(f"annulus/cup_product_{p}_{q}", _worst(residuals), 1e-8, levels=residuals)
    return checks


SUITES: dict[Suite, tuple[Callable[..., list[Check]], ...]] = {
    Suite.COHOM1: (cohom1_checks,),
    Suite.MESH: (mesh_checks,),
    Suite.ALL: (cohom1_checks, mesh_checks),
}


def run_verification(
    suite: Suite | str = Suite.ALL,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    workers: int | None = None,
) -> VerifyReport:
    """Run one suite and collect every check, failing or not."""
    suite = Suite.from_string(suite) if isinstance(suite, str) else suite
    report = VerifyReport(suite)
    for battery in SUITES[suite]:
        if battery is cohom1_checks:
            report.checks.extend(battery(tolerances, workers))
        else:
            report.checks.extend(battery(tolerances))
    logger.info(
        f"Verification '{suite.value}': {len(report.checks) - len(report.failures)}/{len(report.checks)} checks passed"
    )
    return report
