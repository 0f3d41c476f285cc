# this_file: src/pdangles/cohom1/radial.py
"""Radial profiles of the invariant harmonic fields by backward shooting.

The invariant 2k-form ``f(t) vol_fiber + g(t) alpha ^ ... ^ dt`` is closed iff
``g = closure * f'`` and co-closed iff f solves a linear second-order ODE with
regular coefficients on (0, pi/2 - r]. One initial value problem per boundary
condition, started at the boundary and integrated down to ``epsilon``, pins the
solution up to scale; the scale is fixed by the weighted L2 norm.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from loguru import logger
from scipy.integrate import solve_ivp

from ..config import DEFAULT_TOLERANCES, Tolerances
from ..errors import IntegrationError
from .closed_form import closed_form_profiles
from .family import FamilyParams, RadialStructure, Role
from .quadrature import composite_nodes, integrate

Profile = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True, eq=False)
class RadialSolution:
    """Normalized ``(f, g)`` on ``[epsilon, t0]``.

    Attributes:
        params: Family member
        role: Boundary condition at ``t0``
        grid: Increasing sample points (the integrator's steps for shooting solutions)
        f_values: Normalized f on the grid
        g_values: Normalized g on the grid
        constant: Normalization constant C applied to the raw profile
        profile: Raw (unnormalized) profile evaluator
        interpolant: Dense output ``t -> [f, f']`` of the integrator, when shooting
    """

    params: FamilyParams
    role: Role
    grid: np.ndarray
    f_values: np.ndarray
    g_values: np.ndarray
    constant: float
    profile: Profile = field(repr=False)
    interpolant: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def evaluate(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        f, g = self.profile(np.asarray(t, dtype=float))
        return self.constant * f, self.constant * g


def _weight_integrand(structure: RadialStructure, a: Profile, b: Profile) -> Callable[[np.ndarray], np.ndarray]:
    k, n, w = structure.k, structure.n, structure.weight

    def integrand(t: np.ndarray) -> np.ndarray:
        fa, ga = a(t)
        fb, gb = b(t)
        sin_t, cos_t = np.sin(t), np.cos(t)
        return k * sin_t * cos_t**w * fa * fb + cos_t ** (w + 2) / ((n - k) * sin_t) * ga * gb

    return integrand


def weighted_integral(
    params: FamilyParams, a: Profile, b: Profile, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> tuple[float, float]:
    """Weighted L2 pairing of two raw profiles on ``[epsilon, t0]``, with its error estimate."""
    integrand = _weight_integrand(params.structure, a, b)
    return integrate(integrand, tolerances.ode_epsilon, params.boundary_radius, tolerances)


def _normalized(
    params: FamilyParams,
    role: Role,
    profile: Profile,
    grid: np.ndarray,
    tolerances: Tolerances,
    interpolant: Callable[[np.ndarray], np.ndarray] | None = None,
) -> RadialSolution:
    norm, _ = weighted_integral(params, profile, profile, tolerances)
    constant = 1.0 / np.sqrt(norm)
    f, g = profile(grid)
    return RadialSolution(
        params, role, grid, constant * f, constant * g, float(constant), profile, interpolant
    )


def solve_radial(
    params: FamilyParams, role: Role, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> RadialSolution:
    """Shoot from ``t0 = pi/2 - r`` down to ``epsilon`` with DOP853.

    Neumann starts from ``f(t0) = 1, f'(t0) = 0``; Dirichlet from ``f(t0) = 0,
    f'(t0) = -1`` so that f is positive inside, matching the closed form with C > 0.

    Raises:
        IntegrationError: When the integrator stops before ``epsilon``
    """
    structure = params.structure
    t0 = params.boundary_radius
    drift, potential = structure.drift, structure.potential

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        tan_t = np.tan(t)
        return np.array([y[1], (drift * tan_t + 1.0 / tan_t) * y[1] + potential * tan_t**2 * y[0]])

    start = np.array([1.0, 0.0]) if role is Role.NEUMANN else np.array([0.0, -1.0])
    result = solve_ivp(
        rhs,
        (t0, tolerances.ode_epsilon),
        start,
        method="DOP853",
        rtol=tolerances.ode_rtol,
        atol=tolerances.ode_atol,
        dense_output=True,
    )
    if not result.success:
        raise IntegrationError(f"{role.value} shooting failed: {result.message}", float(result.t[-1]))
    logger.debug(f"{role.value} shooting for {params.to_dict()}: {result.t.size} steps")

    dense = result.sol
    closure = structure.closure

    def profile(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        values = dense(np.asarray(t, dtype=float))
        return values[0], closure * values[1]

    return _normalized(params, role, profile, result.t[::-1].copy(), tolerances, dense)


def closed_form_solution(
    params: FamilyParams, role: Role, tolerances: Tolerances = DEFAULT_TOLERANCES, points: int = 200
) -> RadialSolution:
    """The closed-form profile wrapped and normalized like a shooting solution."""
    grid = np.linspace(tolerances.ode_epsilon, params.boundary_radius, points)
    return _normalized(params, role, lambda t: closed_form_profiles(params, role, t), grid, tolerances)


def profile_error(solution: RadialSolution, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Largest relative deviation of a solution's f from the normalized closed form on its grid."""
    reference = closed_form_solution(solution.params, solution.role, tolerances)
    expected, _ = reference.evaluate(solution.grid)
    scale = float(np.max(np.abs(expected)))
    return float(np.max(np.abs(solution.f_values - expected))) / scale


def ode_residual(solution: RadialSolution, order: int = 16) -> float:
    """Relative residual of the radial ODE, integrated over each integrator step.

    On ``[a, b]`` the change ``f'(b) - f'(a)`` is compared with the integral of the
    right-hand side evaluated from the dense interpolant, relative to the total
    variation of ``f'``.
    """
    dense = solution.interpolant
    if dense is None:
        return 0.0
    structure = solution.params.structure
    grid = solution.grid
    misses = []
    variation = 0.0
    for a, b in zip(grid[:-1], grid[1:], strict=True):
        points, weights = composite_nodes(a, b, 1, order)
        f, df = dense(points)
        tan_t = np.tan(points)
        rhs = (structure.drift * tan_t + 1.0 / tan_t) * df + structure.potential * tan_t**2 * f
        ends = dense(np.array([a, b]))
        misses.append(abs((ends[1, 1] - ends[1, 0]) - float(weights @ rhs)))
        variation += float(weights @ np.abs(rhs))
    return max(misses, default=0.0) / max(variation, 1e-300)
