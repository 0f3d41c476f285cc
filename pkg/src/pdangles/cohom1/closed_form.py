# this_file: src/pdangles/cohom1/closed_form.py
"""Closed-form duality angles, radial profiles and normalization constants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .family import Family, FamilyParams, Method, Role


@dataclass(frozen=True)
class AngleResult:
    """Cosine of the single duality angle in degree 2k."""

    cos_theta: float
    method: Method
    params: FamilyParams
    error_estimate: float = 0.0

    @property
    def theta(self) -> float:
        return math.acos(min(1.0, max(-1.0, self.cos_theta)))

    def to_dict(self) -> dict:
        return {
            **self.params.to_dict(),
            "method": self.method.value,
            "cos_theta": self.cos_theta,
            "theta": self.theta,
            "error_estimate": self.error_estimate,
        }


def _sine_power(params: FamilyParams) -> tuple[float, float]:
    # (x, 1 - x) with x = sin(r)^power; 1 - x via expm1 so it stays accurate near r = pi/2.
    power = params.structure.sine_power
    log_sin = math.log(math.sin(params.r))
    return math.exp(power * log_sin), -math.expm1(power * log_sin)


def _denominator(params: FamilyParams) -> float:
    x, _ = _sine_power(params)
    return math.sqrt((1.0 + x) ** 2 + params.structure.middle_term * x)


def closed_form_angle(params: FamilyParams) -> AngleResult:
    """``cos = (1 - x) / sqrt((1 + x)^2 + (n-2k)^2 / (k(n-k)) x)``.

    ``x = sin^(2n) r`` for CP^n and the lens bundles, ``x = sin^n r`` for the
    Grassmannians. The lens result does not depend on m.
    """
    _, one_minus_x = _sine_power(params)
    return AngleResult(one_minus_x / _denominator(params), Method.CLOSED_FORM, params)


def one_minus_cos(params: FamilyParams) -> float:
    """``1 - cos`` without cancellation, for radii where cos is within 1e-16 of 1."""
    x, one_minus_x = _sine_power(params)
    s = _denominator(params)
    return x * (4.0 + params.structure.middle_term) / (s * (s + one_minus_x))


def closed_form_profiles(params: FamilyParams, role: Role, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized radial profiles ``(f, g)`` (constant C = 1) at the points ``t``.

    Neumann: ``f = cos^a t + (k/(n-k)) x / cos^b t``; Dirichlet: ``f = cos^a t - x / cos^b t``,
    with ``g = closure * f'``.
    """
    structure = params.structure
    t = np.asarray(t, dtype=float)
    x, _ = _sine_power(params)
    a, b = structure.regular_power, structure.singular_power
    coefficient = structure.k / (structure.n - structure.k) * x if role is Role.NEUMANN else -x
    cos_t, sin_t = np.cos(t), np.sin(t)
    f = cos_t**a + coefficient * cos_t ** (-b)
    derivative = -a * sin_t * cos_t ** (a - 1) + coefficient * b * sin_t * cos_t ** (-b - 1)
    return f, structure.closure * derivative


def closed_form_norms(params: FamilyParams) -> dict[str, float]:
    """Weighted integrals of the unnormalized profiles, without the constant Q.

    Returns:
        ``NN``, ``DD`` and ``ND`` entries
    """
    structure = params.structure
    x, one_minus_x = _sine_power(params)
    ratio = structure.k / (structure.n - structure.k)
    scale = 1.0 if params.family is Family.GRASSMANN else 0.5
    return {
        "NN": scale * ratio * (1.0 + ratio * x) * one_minus_x,
        "DD": scale * (ratio + x) * one_minus_x,
        "ND": scale * ratio * one_minus_x**2,
    }


def sphere_volume(dimension: int) -> float:
    """Volume of the unit sphere S^dimension."""
    half = (dimension + 1) / 2
    return 2.0 * math.pi**half / math.gamma(half)


def normalization_constants(params: FamilyParams) -> dict:
    """``Q``, ``C_N`` and ``C_D`` with the angle they produce.

    CP^n uses ``vol S^(2n-1) = 2 pi^n / (n-1)!``, divided by m for the lens bundles. For
    the Grassmannians the Stiefel volume is left out (``ratio_only``), so the constants
    are correct up to a common factor that cancels in the angle.
    """
    n, k = params.n, params.k
    ratio_only = params.family is Family.GRASSMANN
    volume = 1.0 if ratio_only else sphere_volume(2 * n - 1) / params.m
    q = math.factorial(n - 1) * math.factorial(k - 1) / math.factorial(n - k - 1) * volume
    norms = closed_form_norms(params)
    c_n = 1.0 / math.sqrt(q * norms["NN"])
    c_d = 1.0 / math.sqrt(q * norms["DD"])
    return {
        **params.to_dict(),
        "volume": volume,
        "ratio_only": ratio_only,
        "Q": q,
        "C_N": c_n,
        "C_D": c_d,
        "cos_theta": c_n * c_d * q * norms["ND"],
    }
