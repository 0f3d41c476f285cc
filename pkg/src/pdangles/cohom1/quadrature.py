# this_file: src/pdangles/cohom1/quadrature.py
"""Composite Gauss-Legendre quadrature with panel doubling."""

from __future__ import annotations

from collections.abc import Callable
from functools import lru_cache

import numpy as np
from loguru import logger

from ..config import DEFAULT_TOLERANCES, Tolerances
from ..errors import QuadratureError


@lru_cache(maxsize=16)
def _reference_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def composite_nodes(a: float, b: float, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of ``panels`` equal Gauss-Legendre panels on ``[a, b]``."""
    nodes, weights = _reference_rule(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    middle = 0.5 * (edges[:-1] + edges[1:])
    points = middle[:, None] + half[:, None] * nodes[None, :]
    return points.ravel(), (half[:, None] * weights[None, :]).ravel()


def integrate(
    integrand: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[float, float]:
    """Integrate a vectorized function, doubling panels until two estimates agree.

    Returns:
        The finer estimate and the difference to the coarser one

    Raises:
        QuadratureError: When ``quad_max_panels`` is reached without convergence
    """
    panels = tolerances.quad_panels
    points, weights = composite_nodes(a, b, panels, tolerances.quad_order)
    previous = float(weights @ integrand(points))
    difference = float("inf")
    while panels < tolerances.quad_max_panels:
        panels *= 2
        points, weights = composite_nodes(a, b, panels, tolerances.quad_order)
        current = float(weights @ integrand(points))
        difference = abs(current - previous)
        if difference <= tolerances.quad_tol * max(1.0, abs(current)):
            logger.debug(f"quadrature converged on {panels} panels (difference {difference:.2e})")
            return current, difference
        previous = current
    raise QuadratureError(
        f"no convergence on [{a:.6g}, {b:.6g}] with {panels} panels "
        f"(last difference {difference:.3e})"
    )
