# this_file: src/pdangles/config.py
"""Numerical tolerances shared by the discrete and the ODE pipelines."""

from dataclasses import asdict, dataclass, replace
from typing import Any, Self

from .errors import ParameterError


@dataclass(frozen=True)
class Tolerances:
    """Every numerical knob in one place.

    Attributes:
        solve_rtol: Relative tolerance for linear and least-squares solves
        null_rtol: Singular values below ``null_rtol * sigma_max`` count as zero
        gap_ratio: Minimum ratio between the last kept and first discarded singular value
        pinv_rtol: Relative cutoff used for pseudo-inverses of the DtN operator
        angle_atol: Absolute cutoff separating zero from nonzero principal-angle cosines
        kernel_atol: Eigenvalues of T squared below this count as zero
        max_condition: Largest accepted condition number of the H_N + H_D basis
        ode_rtol: Relative tolerance of the radial integrator
        ode_atol: Absolute tolerance of the radial integrator
        ode_epsilon: Lower truncation point of the radial interval
        quad_tol: Convergence threshold of composite Gauss-Legendre doubling
        quad_order: Nodes per Gauss-Legendre panel
        quad_panels: Initial number of panels
        quad_max_panels: Panel count at which doubling gives up
    """

    solve_rtol: float = 1e-12
    null_rtol: float = 1e-8
    gap_ratio: float = 1e3
    pinv_rtol: float = 1e-8
    angle_atol: float = 1e-8
    kernel_atol: float = 1e-7
    max_condition: float = 1e8
    ode_rtol: float = 1e-12
    ode_atol: float = 1e-14
    ode_epsilon: float = 1e-6
    quad_tol: float = 1e-11
    quad_order: int = 32
    quad_panels: int = 64
    quad_max_panels: int = 8192

    def with_overrides(self, **overrides: Any) -> Self:
        """Return a copy with the given fields replaced, ignoring ``None`` values."""
        known = set(asdict(self))
        unknown = set(overrides) - known
        if unknown:
            raise ParameterError(
                f"unknown tolerance(s): {', '.join(sorted(unknown))}", module="config"
            )
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for provenance records."""
        return asdict(self)


DEFAULT_TOLERANCES = Tolerances()
