# this_file: src/pdangles/cohom1/family.py
"""Parameters of the cohomogeneity-one families and their radial structure constants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from ..errors import ParameterError


class Family(Enum):
    """Complements of tubes: CP^n minus a ball, lens-space disk bundles, Grassmannians."""

    CPN = "cpn"
    LENS = "lens"
    GRASSMANN = "grassmann"

    @classmethod
    def from_string(cls, value: str) -> Family:
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(f.value for f in cls)
            raise ParameterError(f"unknown family '{value}' (choose from {choices})", module="cohom1") from None


class Role(Enum):
    """Boundary condition imposed at the boundary radius."""

    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"


class Method(Enum):
    CLOSED_FORM = "closed_form"
    ODE_QUADRATURE = "ode_quadrature"


@dataclass(frozen=True)
class FamilyParams:
    """One member of a family.

    Attributes:
        family: Which family
        n: Dimension parameter, at least 2
        k: Middle degree index, 1 <= k <= n-1 (the angle lives in degree 2k)
        r: Radius of the removed tube, 0 < r < pi/2
        m: Euler class of the lens bundle; 1 for the other families
    """

    family: Family
    n: int
    k: int
    r: float
    m: int = 1

    def __post_init__(self) -> None:
        if isinstance(self.family, str):
            object.__setattr__(self, "family", Family.from_string(self.family))
        problems = self.validate()
        if problems:
            raise ParameterError("; ".join(problems), module="cohom1")

    def validate(self) -> list[str]:
        """Return the list of range violations (empty when valid)."""
        problems = []
        if int(self.n) != self.n or self.n < 2:
            problems.append(f"n must be an integer >= 2, got {self.n}")
        elif int(self.k) != self.k or not 1 <= self.k <= self.n - 1:
            problems.append(f"k must be an integer in 1..{self.n - 1}, got {self.k}")
        if not (0.0 < self.r < math.pi / 2) or not math.isfinite(self.r):
            problems.append(f"r must lie in (0, pi/2), got {self.r}")
        if int(self.m) != self.m or self.m < 1:
            problems.append(f"m must be an integer >= 1, got {self.m}")
        elif self.m != 1 and self.family is not Family.LENS:
            problems.append(f"m applies to the lens family only, got m={self.m} for {self.family.value}")
        return problems

    @property
    def boundary_radius(self) -> float:
        """``t0 = pi/2 - r``, where the boundary sits in the radial coordinate."""
        return math.pi / 2 - self.r

    @property
    def structure(self) -> RadialStructure:
        return RadialStructure.of(self.family, self.n, self.k)

    def to_dict(self) -> dict:
        return {"family": self.family.value, "n": self.n, "k": self.k, "r": self.r, "m": self.m}


@dataclass(frozen=True)
class RadialStructure:
    """Exponents shared by the ODE, the closed-form profiles and the L2 weight.

    The radial ODE reads ``f'' - (drift tan t + cot t) f' - potential tan^2 t f = 0``,
    closedness ties ``g = closure * f'``, and the L2 weight is
    ``k sin t cos^(weight) t f_A f_B + cos^(weight + 2) t / ((n - k) sin t) g_A g_B``.
    """

    n: int
    k: int
    drift: int
    potential: int
    closure: float
    regular_power: int
    singular_power: int
    sine_power: int
    weight: int

    @classmethod
    def of(cls, family: Family, n: int, k: int) -> RadialStructure:
        if family is Family.GRASSMANN:
            return cls(
                n=n,
                k=k,
                drift=n - 2 * k + 1,
                potential=k * (n - k),
                closure=-1.0,
                regular_power=k,
                singular_power=n - k,
                sine_power=n,
                weight=n - 2 * k - 1,
            )
        return cls(
            n=n,
            k=k,
            drift=2 * n - 4 * k + 1,
            potential=4 * k * (n - k),
            closure=0.5,
            regular_power=2 * k,
            singular_power=2 * n - 2 * k,
            sine_power=2 * n,
            weight=2 * n - 4 * k - 1,
        )

    @property
    def middle_term(self) -> float:
        """``(n - 2k)^2 / (k (n - k))``, the asymmetry term of the angle formula."""
        return (self.n - 2 * self.k) ** 2 / (self.k * (self.n - self.k))
