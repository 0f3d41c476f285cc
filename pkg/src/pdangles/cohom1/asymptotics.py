# this_file: src/pdangles/cohom1/asymptotics.py
"""Log-log exponents of the duality angle as the tube shrinks or closes up."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from loguru import logger

from ..errors import ParameterError, UnderflowError
from .closed_form import closed_form_angle, one_minus_cos
from .family import Family, FamilyParams

EXPONENT_COLUMNS = ("family", "n", "k", "slope", "expected", "rel_err")

SMALL_RADIUS_LIMIT = 0.1
MIN_POINTS = 5


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares slope of one log-log fit against its expected value.

    Attributes:
        family: Which family
        n: Dimension parameter
        k: Degree index
        slope: Fitted slope of ``log(1 - cos)`` against ``log r``
        expected: ``2n`` for CP^n and lens bundles, ``n`` for Grassmannians
        theta_slope: Fitted slope of ``log theta`` against ``log r``
        closing_slope: Slope of ``log cos`` against ``log(pi/2 - r)``, when measured
    """

    family: Family
    n: int
    k: int
    slope: float
    expected: float
    theta_slope: float
    closing_slope: float | None = None

    @property
    def rel_err(self) -> float:
        return abs(self.slope - self.expected) / self.expected

    def row(self) -> dict:
        """The exponent CSV row."""
        return {
            "family": self.family.value,
            "n": self.n,
            "k": self.k,
            "slope": self.slope,
            "expected": self.expected,
            "rel_err": self.rel_err,
        }

    def to_dict(self) -> dict:
        return {
            **self.row(),
            "theta_slope": self.theta_slope,
            "theta_expected": self.expected / 2,
            "closing_slope": self.closing_slope,
        }


def expected_exponent(family: Family, n: int) -> int:
    return n if family is Family.GRASSMANN else 2 * n


def _fit_slope(x: np.ndarray, y: np.ndarray) -> float:
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def _check_grid(grid: Sequence[float], name: str) -> np.ndarray:
    values = np.asarray(sorted(set(float(v) for v in grid)), dtype=float)
    if values.size < MIN_POINTS:
        raise ParameterError(f"{name} needs at least {MIN_POINTS} distinct points, got {values.size}", module="cohom1")
    if values[0] <= 0.0 or values[-1] > SMALL_RADIUS_LIMIT:
        raise ParameterError(
            f"{name} must lie in (0, {SMALL_RADIUS_LIMIT}], got [{values[0]:.3g}, {values[-1]:.3g}]",
            module="cohom1",
        )
    return values


def _require_positive(values: np.ndarray, grid: np.ndarray, what: str) -> None:
    bad = ~np.isfinite(values) | (values <= 0.0)
    if np.any(bad):
        where = float(grid[np.argmax(bad)])
        raise UnderflowError(f"{what} is not representable at {where:.3e}; raise the smallest grid value")


def asymptotic_exponent(
    family: Family | str,
    n: int,
    k: int,
    r_grid: Sequence[float],
    u_grid: Sequence[float] | None = None,
) -> ExponentFit:
    """Fit the decay exponent of ``1 - cos theta`` as ``r -> 0``.

    Args:
        family: Which family
        n: Dimension parameter
        k: Degree index
        r_grid: At least five radii in ``(0, 0.1]``
        u_grid: Optional distances ``pi/2 - r`` in ``(0, 0.1]`` for the closing exponent

    Returns:
        The fit with the exponent of theta beside it

    Raises:
        ParameterError: On a grid that is too short or out of range
        UnderflowError: When ``1 - cos theta`` is not a positive double somewhere on the grid
    """
    family = Family.from_string(family) if isinstance(family, str) else family
    radii = _check_grid(r_grid, "r_grid")
    gaps = np.array([one_minus_cos(FamilyParams(family, n, k, float(r))) for r in radii])
    _require_positive(gaps, radii, "1 - cos theta")
    # theta = 2 asin(sqrt((1 - cos) / 2)) keeps full precision when cos is within an ulp of 1.
    thetas = 2.0 * np.arcsin(np.sqrt(gaps / 2.0))
    log_r = np.log(radii)
    fit = ExponentFit(
        family=family,
        n=n,
        k=k,
        slope=_fit_slope(log_r, np.log(gaps)),
        expected=float(expected_exponent(family, n)),
        theta_slope=_fit_slope(log_r, np.log(thetas)),
        closing_slope=None if u_grid is None else closing_exponent(family, n, k, u_grid),
    )
    logger.debug(f"exponent fit {fit.to_dict()}")
    return fit


def closing_exponent(family: Family | str, n: int, k: int, u_grid: Sequence[float]) -> float:
    """Slope of ``log cos theta`` against ``log(pi/2 - r)``; 2 for every family."""
    family = Family.from_string(family) if isinstance(family, str) else family
    gaps = _check_grid(u_grid, "u_grid")
    cosines = np.array([closed_form_angle(FamilyParams(family, n, k, math.pi / 2 - float(u))).cos_theta for u in gaps])
    _require_positive(cosines, gaps, "cos theta")
    return _fit_slope(np.log(gaps), np.log(cosines))


def exponent_study(
    families: Sequence[Family],
    ns: Sequence[int],
    r_grid: Sequence[float],
    u_grid: Sequence[float] | None = None,
) -> list[ExponentFit]:
    """One fit per ``(family, n, k)`` with k over 1..n-1, in that order."""
    return [
        asymptotic_exponent(family, n, k, r_grid, u_grid)
        for family in families
        for n in ns
        for k in range(1, n)
    ]


def default_radii(points: int = 9, smallest: float = 1e-3, largest: float = SMALL_RADIUS_LIMIT) -> list[float]:
    """Log-spaced radii between ``smallest`` and ``largest``."""
    return [float(v) for v in np.geomspace(smallest, largest, points)]
