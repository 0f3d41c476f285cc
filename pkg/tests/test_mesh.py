# this_file: tests/test_mesh.py
"""Unit tests for complexes, generators, homology and OFF input."""

import numpy as np
import pytest

from pdangles.errors import MeshValidationError, OffParseError
from pdangles.mesh import (
    GeneratorSpec,
    MeshSource,
    OffLoader,
    SimplicialComplex,
    betti_numbers,
    boundary_components,
    euler_characteristic,
    generate_annulus,
    generate_disk,
    generate_flat_torus,
    generate_punctured_torus,
    integer_rank,
    load_off,
    load_off_file,
    relative_betti_numbers,
    to_off,
)

SQUARE_OFF = """OFF
# unit square split along a diagonal
4 2 5
0 0 0
1 0 0
1 1 0
0 1 0
3 0 1 2
3 0 2 3
"""


class TestSimplicialComplex:
    """Test construction and validation of oriented complexes."""

    def test_single_triangle(self):
        """Test counts, boundary and orientation of one triangle."""
        complex_ = SimplicialComplex.from_top_simplices([(0, 1, 2)])
        assert complex_.counts == (3, 3, 1)
        assert complex_.validate() == []
        assert complex_.boundary is not None
        assert complex_.boundary.complex.counts == (3, 3)
        assert list(complex_.top_signs) == [1]

    def test_reversed_winding_sign(self):
        """Test that an odd winding gives a negative top sign."""
        complex_ = SimplicialComplex.from_top_simplices([(0, 2, 1)])
        assert list(complex_.top_signs) == [-1]

    def test_incidence_squares_to_zero(self, annulus):
        """Test d composed with d vanishes."""
        complex_ = annulus.forms.complex
        product = (complex_.incidence[1] @ complex_.incidence[0]).toarray()
        assert np.count_nonzero(product) == 0

    def test_index_of_any_order(self):
        """Test simplex lookup ignores vertex order."""
        complex_ = SimplicialComplex.from_top_simplices([(0, 1, 2), (0, 2, 3)])
        assert complex_.index_of(1, (2, 0)) == complex_.index_of(1, (0, 2))
        with pytest.raises(MeshValidationError):
            complex_.index_of(1, (1, 3))

    def test_duplicate_simplex_rejected(self):
        """Test duplicated top simplices are an error."""
        with pytest.raises(MeshValidationError, match="duplicate simplex"):
            SimplicialComplex.from_top_simplices([(0, 1, 2), (2, 1, 0)])

    def test_degenerate_simplex_rejected(self):
        """Test repeated vertices are an error naming the simplex."""
        with pytest.raises(MeshValidationError, match=r"degenerate simplex \(0, 1, 1\)"):
            SimplicialComplex.from_top_simplices([(0, 1, 1)])

    def test_inconsistent_orientation_reported(self):
        """Test two triangles inducing the same direction on their shared edge."""
        complex_ = SimplicialComplex.from_top_simplices([(0, 1, 2), (0, 1, 3)])
        problems = complex_.validate()
        assert any("inconsistent orientation across face (0, 1)" in p for p in problems)
        with pytest.raises(MeshValidationError):
            complex_.check()

    def test_non_manifold_edge_reported(self):
        """Test an edge shared by three triangles."""
        complex_ = SimplicialComplex.from_top_simplices([(0, 1, 2), (1, 0, 3), (0, 1, 4)])
        assert any("non-manifold face (0, 1)" in p for p in complex_.validate())

    def test_unused_vertex_rejected(self):
        """Test vertices outside every simplex are an error."""
        with pytest.raises(MeshValidationError, match="not used"):
            SimplicialComplex.from_top_simplices([(0, 1, 2)], n_vertices=4)


class TestHomology:
    """Test Betti numbers from exact integer ranks."""

    def test_annulus(self):
        """Test the annulus has one loop and two boundary circles."""
        complex_, _ = generate_annulus(2, 8, 1.0, 2.0)
        assert betti_numbers(complex_) == (1, 1, 0)
        assert boundary_components(complex_) == 2
        assert euler_characteristic(complex_) == 0

    def test_punctured_torus(self):
        """Test the punctured torus has two loops and one boundary circle."""
        complex_, _ = generate_punctured_torus(6, 2)
        assert betti_numbers(complex_) == (1, 2, 0)
        assert boundary_components(complex_) == 1
        assert euler_characteristic(complex_) == -1

    def test_disk(self):
        """Test the disk is acyclic with one boundary circle."""
        complex_, _ = generate_disk(3, 6)
        assert betti_numbers(complex_) == (1, 0, 0)
        assert boundary_components(complex_) == 1

    def test_flat_torus(self):
        """Test the closed torus."""
        complex_, _ = generate_flat_torus(4)
        assert complex_.is_closed
        assert betti_numbers(complex_) == (1, 2, 1)
        assert boundary_components(complex_) == 0

    @pytest.mark.parametrize(
        ("build", "expected"),
        [
            (lambda: generate_annulus(2, 8, 1.0, 2.0), (0, 1, 1)),
            (lambda: generate_punctured_torus(6, 2), (0, 2, 1)),
            (lambda: generate_disk(3, 6), (0, 0, 1)),
        ],
        ids=["annulus", "punctured_torus", "disk"],
    )
    def test_relative_betti_numbers(self, build, expected):
        """Test ranks of the complex of cochains vanishing on the boundary."""
        complex_, _ = build()
        assert relative_betti_numbers(complex_) == expected

    @pytest.mark.parametrize(
        "build", [lambda: generate_annulus(3, 10, 1.0, 3.0), lambda: generate_punctured_torus(8, 3)]
    )
    def test_relative_betti_satisfy_lefschetz_duality(self, build):
        """Test b_p(M, dM) = b_(n-p)(M) on orientable surfaces."""
        complex_, _ = build()
        assert relative_betti_numbers(complex_) == tuple(reversed(betti_numbers(complex_)))

    def test_relative_betti_on_closed_complex(self):
        """Test a closed complex has nothing to be relative to."""
        complex_, _ = generate_flat_torus(4)
        assert relative_betti_numbers(complex_) == (1, 2, 1)

    def test_integer_rank(self):
        """Test rank of a small integer matrix."""
        matrix = np.array([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
        assert integer_rank(matrix) == 2


class TestGenerators:
    """Test generator parameter validation."""

    def test_hole_too_large(self):
        """Test a hole leaving no collar is rejected."""
        with pytest.raises(MeshValidationError, match="hole"):
            generate_punctured_torus(5, 4)

    def test_annulus_radii(self):
        """Test inner radius must stay below the outer one."""
        with pytest.raises(MeshValidationError):
            generate_annulus(2, 8, 2.0, 1.0)

    def test_disk_vertex_count(self):
        """Test the fan plus rings layout."""
        complex_, _ = generate_disk(3, 6)
        assert complex_.count(0) == 1 + 6 * (1 + 2 + 3)


class TestOffLoader:
    """Test OFF parsing and writing."""

    def test_load_square(self):
        """Test a two-triangle square."""
        complex_, geometry = OffLoader().load_text(SQUARE_OFF)
        assert complex_.counts == (4, 5, 2)
        assert betti_numbers(complex_) == (1, 0, 0)
        assert geometry.lengths(complex_).max() == pytest.approx(np.sqrt(2.0))

    def test_missing_header(self):
        """Test the OFF keyword is required."""
        with pytest.raises(OffParseError, match="header"):
            OffLoader().load_text(SQUARE_OFF.replace("OFF\n", "", 1))

    def test_missing_vertex(self):
        """Test a face referencing an absent vertex."""
        with pytest.raises(OffParseError, match="missing vertex 7"):
            OffLoader().load_text(SQUARE_OFF.replace("3 0 2 3", "3 0 2 7"))

    def test_non_triangle(self):
        """Test quads are rejected."""
        with pytest.raises(OffParseError, match="triangle"):
            OffLoader().load_text(SQUARE_OFF.replace("3 0 2 3", "4 0 1 2 3"))

    def test_written_mesh_reloads(self, tmp_path):
        """Test to_off output loads back with the same topology and orientation."""
        complex_, geometry = generate_annulus(2, 8, 1.0, 2.0)
        path = tmp_path / "annulus.off"
        path.write_text(to_off(complex_, geometry), encoding="utf-8")
        loaded, _ = OffLoader().load_file(path)
        assert loaded.counts == complex_.counts
        assert betti_numbers(loaded) == (1, 1, 0)
        assert np.array_equal(loaded.top_signs, complex_.top_signs)

    def test_file_not_found(self, tmp_path):
        """Test a missing file."""
        with pytest.raises(FileNotFoundError):
            OffLoader().load_file(tmp_path / "absent.off")

    def test_load_off_parses_text(self):
        """Test the module-level loader takes OFF text."""
        complex_, _ = load_off(SQUARE_OFF)
        assert complex_.counts == (4, 5, 2)

    def test_load_off_file_reads_path(self, tmp_path):
        """Test the file variant reads the same mesh from disk."""
        path = tmp_path / "square.off"
        path.write_text(SQUARE_OFF, encoding="utf-8")
        complex_, _ = load_off_file(path)
        assert complex_.counts == (4, 5, 2)


class TestMeshSource:
    """Test the path-or-generator mesh source."""

    def test_generator_defaults(self):
        """Test defaults fill missing generator parameters."""
        spec = GeneratorSpec("punctured-torus", {"divisions": 6})
        assert spec.resolved() == {"divisions": 6, "hole": 2}
        complex_, _ = MeshSource(generator=spec).build()
        assert betti_numbers(complex_) == (1, 2, 0)

    def test_unknown_generator_parameter(self):
        """Test parameters of another generator are rejected."""
        with pytest.raises(MeshValidationError, match="unknown parameters: hole"):
            GeneratorSpec("annulus", {"hole": 2})

    def test_unknown_generator(self):
        """Test an unknown generator name."""
        with pytest.raises(MeshValidationError, match="unknown generator"):
            GeneratorSpec("sphere")

    def test_exactly_one_source(self, tmp_path):
        """Test path and generator are mutually exclusive."""
        with pytest.raises(MeshValidationError):
            MeshSource()
        with pytest.raises(MeshValidationError):
            MeshSource(path=tmp_path / "a.off", generator=GeneratorSpec("disk"))

    def test_path_source(self, tmp_path):
        """Test an OFF path source."""
        path = tmp_path / "square.off"
        path.write_text(SQUARE_OFF, encoding="utf-8")
        source = MeshSource(path=str(path))
        complex_, _ = source.build()
        assert complex_.counts == (4, 5, 2)
        assert source.to_dict() == {"path": str(path)}
