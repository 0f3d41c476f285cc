# this_file: src/pdangles/forms/cochain.py
"""Cochains: coefficient vectors of Whitney forms on the interior or the boundary."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import DegreeError


class Carrier(Enum):
    """Complex a cochain lives on."""

    INTERIOR = "interior"
    BOUNDARY = "boundary"

    @classmethod
    def from_string(cls, value: str) -> Carrier:
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise DegreeError(f"unknown carrier '{value}'") from None


@dataclass(frozen=True, eq=False)
class Cochain:
    """A p-cochain: one real coefficient per oriented p-simplex of its carrier."""

    degree: int
    carrier: Carrier
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise DegreeError(f"cochain values must be a vector, got shape {values.shape}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def _check_compatible(self, other: Cochain) -> None:
        if other.degree != self.degree or other.carrier is not self.carrier:
            raise DegreeError(
                f"cannot combine {self.carrier.value} {self.degree}-cochain with "
                f"{other.carrier.value} {other.degree}-cochain"
            )

    def __add__(self, other: Cochain) -> Cochain:
        self._check_compatible(other)
        return Cochain(self.degree, self.carrier, self.values + other.values)

    def __sub__(self, other: Cochain) -> Cochain:
        self._check_compatible(other)
        return Cochain(self.degree, self.carrier, self.values - other.values)

    def __neg__(self) -> Cochain:
        return Cochain(self.degree, self.carrier, -self.values)

    def __mul__(self, scalar: float) -> Cochain:
        return Cochain(self.degree, self.carrier, float(scalar) * self.values)

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON reports."""
        return {"degree": self.degree, "carrier": self.carrier.value, "values": self.values.tolist()}
