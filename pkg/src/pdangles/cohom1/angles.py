# this_file: src/pdangles/cohom1/angles.py
"""Duality angles from shooting plus quadrature, and parameter sweeps."""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor

from loguru import logger

from ..config import DEFAULT_TOLERANCES, Tolerances
from ..errors import ParameterError
from .closed_form import AngleResult, closed_form_angle
from .family import Family, FamilyParams, Method, Role
from .radial import RadialSolution, solve_radial, weighted_integral

SWEEP_COLUMNS = (
    "family",
    "n",
    "k",
    "r",
    "m",
    "cos_theta_closed",
    "cos_theta_numeric",
    "abs_diff",
)


def weighted_l2(
    params: FamilyParams,
    a: RadialSolution,
    b: RadialSolution,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """L2 inner product of the two normalized fields, without the constant Q."""
    if a.params != params or b.params != params:
        raise ParameterError("radial solutions belong to different parameters", module="cohom1")
    value, _ = weighted_integral(params, a.evaluate, b.evaluate, tolerances)
    return value


def numeric_angle(params: FamilyParams, tolerances: Tolerances = DEFAULT_TOLERANCES) -> AngleResult:
    """``<N, D> / sqrt(<N, N> <D, D>)`` from the two shooting solutions."""
    neumann = solve_radial(params, Role.NEUMANN, tolerances)
    dirichlet = solve_radial(params, Role.DIRICHLET, tolerances)
    cross, cross_error = weighted_integral(params, neumann.evaluate, dirichlet.evaluate, tolerances)
    nn, nn_error = weighted_integral(params, neumann.evaluate, neumann.evaluate, tolerances)
    dd, dd_error = weighted_integral(params, dirichlet.evaluate, dirichlet.evaluate, tolerances)
    cosine = cross / math.sqrt(nn * dd)
    error = cross_error + 0.5 * abs(cosine) * (nn_error + dd_error)
    return AngleResult(cosine, Method.ODE_QUADRATURE, params, error)


def compare(params: FamilyParams, tolerances: Tolerances = DEFAULT_TOLERANCES) -> dict:
    """One sweep row: both routes and their absolute difference."""
    closed = closed_form_angle(params).cos_theta
    numeric = numeric_angle(params, tolerances).cos_theta
    return {
        "family": params.family.value,
        "n": params.n,
        "k": params.k,
        "r": params.r,
        "m": params.m,
        "cos_theta_closed": closed,
        "cos_theta_numeric": numeric,
        "abs_diff": abs(closed - numeric),
    }


def parameter_grid(
    families: Iterable[Family],
    ns: Iterable[int],
    rs: Iterable[float],
    ms: Sequence[int] = (1,),
) -> list[FamilyParams]:
    """Every valid ``(family, n, k, r, m)`` in deterministic order, k running over 1..n-1."""
    grid = []
    for family, n, r in itertools.product(families, ns, rs):
        for k in range(1, n):
            for m in ms if family is Family.LENS else (1,):
                grid.append(FamilyParams(family, n, k, r, m))
    return grid


def _compare_star(args: tuple[FamilyParams, Tolerances]) -> dict:
    return compare(*args)


def sweep(
    grid: Sequence[FamilyParams],
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    workers: int | None = None,
) -> list[dict]:
    """Compare both routes over a grid; rows come back in grid order.

    Args:
        grid: Parameter tuples
        tolerances: Numerical tolerances
        workers: Process count; 1 runs serially, None lets the pool decide
    """
    jobs = [(params, tolerances) for params in grid]
    if workers == 1 or len(jobs) <= 1:
        rows = [_compare_star(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_compare_star, jobs))
    worst = max((row["abs_diff"] for row in rows), default=0.0)
    logger.info(f"Sweep over {len(rows)} parameter tuples finished; worst difference {worst:.3e}")
    return rows
