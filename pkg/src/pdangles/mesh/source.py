# this_file: src/pdangles/mesh/source.py
"""Where a mesh comes from: an OFF file or a named generator with parameters."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from ..errors import MeshValidationError
from .complex import SimplicialComplex
from .generators import generate_annulus, generate_disk, generate_flat_torus, generate_punctured_torus
from .geometry import MeshGeometry
from .loader import load_off_file


class GeneratorKind(Enum):
    """Shipped mesh generators."""

    ANNULUS = "annulus"
    PUNCTURED_TORUS = "punctured-torus"
    FLAT_TORUS = "flat-torus"
    DISK = "disk"

    @classmethod
    def from_string(cls, value: str) -> GeneratorKind:
        try:
            return cls(str(value).strip().lower().replace("_", "-"))
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise MeshValidationError(f"unknown generator '{value}' (choose from {choices})") from None


# Parameter names, defaults and the generator each kind calls.
_GENERATORS: dict[GeneratorKind, tuple[dict[str, float | int], Callable[..., tuple]]] = {
    GeneratorKind.ANNULUS: (
        {"n_radial": 4, "n_angular": 16, "r_in": 1.0, "r_out": 2.0},
        generate_annulus,
    ),
    GeneratorKind.PUNCTURED_TORUS: ({"divisions": 8, "hole": 2}, generate_punctured_torus),
    GeneratorKind.FLAT_TORUS: ({"divisions": 6}, generate_flat_torus),
    GeneratorKind.DISK: ({"n_rings": 6, "n_sectors": 6, "radius": 1.0}, generate_disk),
}


@dataclass(frozen=True)
class GeneratorSpec:
    """A generator kind plus keyword parameters; missing ones take the defaults."""

    kind: GeneratorKind
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", GeneratorKind.from_string(self.kind))
        defaults, _ = _GENERATORS[self.kind]
        unknown = sorted(set(self.params) - set(defaults))
        if unknown:
            raise MeshValidationError(
                f"{self.kind.value} takes {', '.join(defaults)}; unknown parameters: {', '.join(unknown)}"
            )

    def resolved(self) -> dict:
        """Parameters with defaults filled in, cast to the defaults' types."""
        defaults, _ = _GENERATORS[self.kind]
        return {name: type(default)(self.params.get(name, default)) for name, default in defaults.items()}

    def build(self) -> tuple[SimplicialComplex, MeshGeometry]:
        _, generator = _GENERATORS[self.kind]
        return generator(**self.resolved())

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "params": self.resolved()}


@dataclass(frozen=True)
class MeshSource:
    """Exactly one of an OFF path or a generator spec."""

    path: Path | None = None
    generator: GeneratorSpec | None = None

    def __post_init__(self) -> None:
        if (self.path is None) == (self.generator is None):
            raise MeshValidationError("give exactly one mesh source: an OFF path or a generator")
        if self.path is not None and not isinstance(self.path, Path):
            object.__setattr__(self, "path", Path(self.path))

    def build(self) -> tuple[SimplicialComplex, MeshGeometry]:
        if self.path is not None:
            return load_off_file(self.path)
        return self.generator.build()

    def to_dict(self) -> dict:
        if self.path is not None:
            return {"path": str(self.path)}
        return {"generator": self.generator.to_dict()}
