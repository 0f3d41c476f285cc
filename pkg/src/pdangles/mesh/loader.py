# this_file: src/pdangles/mesh/loader.py
"""OFF triangle mesh loading and writing.

``load_off`` parses OFF text; ``load_off_file`` reads it from disk first.
"""

from pathlib import Path

import numpy as np
from loguru import logger

from ..errors import OffParseError
from .complex import SimplicialComplex
from .geometry import MeshGeometry


class OffLoader:
    """Loads triangle meshes from the OFF format into oriented complexes."""

    def __init__(self, validate: bool = True):
        """Initialize loader.

        Args:
            validate: If True, reject meshes that are not oriented 2-manifolds with boundary
        """
        self.validate = validate

    def load_file(self, file_path: str | Path) -> tuple[SimplicialComplex, MeshGeometry]:
        """Load a mesh from an OFF file.

        Args:
            file_path: Path to the ``.off`` file

        Returns:
            Complex and geometry built from the file

        Raises:
            FileNotFoundError: If file doesn't exist
            OffParseError: If the file is not valid OFF
            MeshValidationError: If the mesh is not an oriented manifold with boundary
        """
        path = Path(file_path)
        if not path.exists():
            raise FileNotFoundError(f"Mesh file not found: {path}")
        logger.info(f"Loading mesh from: {path}")
        return self.load_text(path.read_text(encoding="utf-8"))

    def load_text(self, text: str) -> tuple[SimplicialComplex, MeshGeometry]:
        """Load a mesh from OFF text."""
        coords, faces = self.parse(text)
        problems = self.validate_structure(coords, faces)
        if problems:
            raise OffParseError("; ".join(problems))

        complex_ = SimplicialComplex.from_top_simplices(faces, n_vertices=coords.shape[0])
        geometry = MeshGeometry(vertex_coords=coords)
        if self.validate:
            complex_.check()
            geometry.check(complex_)
        logger.info(f"Loaded mesh with simplex counts {complex_.counts}")
        return complex_, geometry

    def parse(self, text: str) -> tuple[np.ndarray, np.ndarray]:
        """Split OFF text into vertex coordinates and triangle records."""
        lines = []
        for raw in text.splitlines():
            content = raw.split("#", 1)[0].strip()
            if content:
                lines.append(content.split())
        if not lines or lines[0] != ["OFF"]:
            raise OffParseError("missing OFF header")
        if len(lines) < 2 or len(lines[1]) != 3:
            raise OffParseError("expected a 'V F E' count line")
        try:
            n_vertices, n_faces, _ = (int(token) for token in lines[1])
        except ValueError:
            raise OffParseError(f"non-integer counts: {' '.join(lines[1])}") from None
        if n_vertices <= 0 or n_faces <= 0:
            raise OffParseError(f"counts must be positive, got V={n_vertices} F={n_faces}")

        body = lines[2:]
        if len(body) != n_vertices + n_faces:
            raise OffParseError(
                f"expected {n_vertices} vertex and {n_faces} face records, found {len(body)}"
            )

        coords = np.zeros((n_vertices, 3))
        for i, record in enumerate(body[:n_vertices]):
            if len(record) != 3:
                raise OffParseError(f"vertex {i} record has {len(record)} values, expected 3")
            try:
                coords[i] = [float(token) for token in record]
            except ValueError:
                raise OffParseError(f"vertex {i} has non-numeric coordinates") from None

        faces = np.zeros((n_faces, 3), dtype=np.int64)
        for i, record in enumerate(body[n_vertices:]):
            if record[0] != "3" or len(record) != 4:
                raise OffParseError(f"face {i} is not a triangle record '3 a b c'")
            try:
                faces[i] = [int(token) for token in record[1:]]
            except ValueError:
                raise OffParseError(f"face {i} has non-integer vertex indices") from None
        return coords, faces

    def validate_structure(self, coords: np.ndarray, faces: np.ndarray) -> list[str]:
        """Check that every face references existing vertices.

        Returns:
            List of problems
        """
        errors = []
        n = coords.shape[0]
        for i, face in enumerate(faces):
            bad = [int(v) for v in face if not 0 <= v < n]
            if bad:
                errors.append(f"face {i} ({', '.join(map(str, face))}) references missing vertex {bad[0]}")
        if not np.all(np.isfinite(coords)):
            errors.append("vertex coordinates must be finite")
        return errors


def load_off(text: str) -> tuple[SimplicialComplex, MeshGeometry]:
    """Parse and validate OFF text."""
    return OffLoader().load_text(text)


def load_off_file(path: str | Path) -> tuple[SimplicialComplex, MeshGeometry]:
    """Load and validate an OFF triangle mesh from a file."""
    return OffLoader().load_file(path)


def to_off(complex_: SimplicialComplex, geometry: MeshGeometry) -> str:
    """Render a triangle complex as OFF text, preserving the orientation of every face."""
    if complex_.dim != 2 or geometry.vertex_coords is None:
        raise OffParseError("only embedded triangle meshes can be written as OFF")
    coords = np.asarray(geometry.vertex_coords, dtype=float)
    if coords.shape[1] == 2:
        coords = np.column_stack([coords, np.zeros(coords.shape[0])])
    faces = complex_.simplices[2].copy()
    flipped = complex_.top_signs < 0
    faces[flipped] = faces[flipped][:, [1, 0, 2]]

    lines = ["OFF", f"{coords.shape[0]} {faces.shape[0]} {complex_.count(1)}"]
    lines += [" ".join(repr(float(x)) for x in row) for row in coords]
    lines += ["3 " + " ".join(str(int(v)) for v in row) for row in faces]
    return "\n".join(lines) + "\n"
