# this_file: tests/test_hodge.py
"""Unit tests for harmonic fields, decompositions and duality angles."""

import numpy as np
import pytest

from pdangles.errors import DegreeError, ParameterError
from pdangles.hodge import SubspaceRole, principal_angles, subspace_distance
from pdangles.mesh import betti_numbers, relative_betti_numbers


class TestHarmonicDimensions:
    """Test dimensions of the discrete harmonic fields against Betti numbers."""

    @pytest.mark.parametrize("mesh", ["annulus", "punctured_torus", "disk", "flat_torus"])
    def test_neumann_and_dirichlet_match_betti(self, mesh, request):
        """Test dim H^p_N = b_p and dim H^p_D = b_p(M, dM)."""
        pipeline = request.getfixturevalue(mesh)
        betti = betti_numbers(pipeline.forms.complex)
        relative = relative_betti_numbers(pipeline.forms.complex)
        for p in range(pipeline.forms.dim + 1):
            assert pipeline.hodge.harmonic_neumann_fields(p).dimension == betti[p]
            assert pipeline.hodge.harmonic_dirichlet_fields(p).dimension == relative[p]

    def test_harmonic_fields_exceed_betti_with_boundary(self, annulus):
        """Test H^1 without boundary conditions is larger than H^1_N."""
        hodge = annulus.hodge
        assert hodge.harmonic_fields(1).dimension > hodge.harmonic_neumann_fields(1).dimension

    def test_bases_are_orthonormal(self, punctured_torus):
        """Test mass-orthonormality of the returned bases."""
        forms, hodge = punctured_torus.forms, punctured_torus.hodge
        for basis in (hodge.harmonic_neumann_fields(1), hodge.harmonic_dirichlet_fields(1)):
            assert np.allclose(basis.gram(forms.mass(1)), np.eye(basis.dimension), atol=1e-10)

    def test_constraints_hold(self, punctured_torus):
        """Test closedness and boundary conditions of the harmonic fields."""
        hodge = punctured_torus.hodge
        assert hodge.constraint_residuals(hodge.harmonic_neumann_fields(1)) < 1e-9
        assert hodge.constraint_residuals(hodge.harmonic_dirichlet_fields(1)) < 1e-9

    def test_degree_out_of_range(self, annulus):
        """Test degrees above the dimension are rejected."""
        with pytest.raises(DegreeError):
            annulus.hodge.harmonic_neumann_fields(3)


class TestInteriorBoundarySplit:
    """Test the interior/boundary splits of H_N and H_D."""

    def test_annulus_split(self, annulus):
        """Test the annulus loop comes entirely from the boundary."""
        boundary, interior = annulus.hodge.interior_boundary_split_N(1)
        assert (interior.dimension, boundary.dimension) == (0, 1)
        assert boundary.role is SubspaceRole.BOUNDARY_N

    def test_punctured_torus_split(self, punctured_torus):
        """Test both torus loops are interior cohomology."""
        boundary, interior = punctured_torus.hodge.interior_boundary_split_N(1)
        assert (interior.dimension, boundary.dimension) == (2, 0)

    @pytest.mark.parametrize("mesh", ["annulus", "punctured_torus", "disk"])
    def test_interior_dimensions_agree(self, mesh, request):
        """Test dim of the interior parts of H_N and H_D coincide."""
        hodge = request.getfixturevalue(mesh).hodge
        for p in range(3):
            _, interior_n = hodge.interior_boundary_split_N(p)
            _, interior_d = hodge.interior_boundary_split_D(p)
            assert interior_n.dimension == interior_d.dimension

    def test_trace_criterion(self, annulus, punctured_torus):
        """Test interior fields have exact traces and boundary fields do not."""
        assert punctured_torus.hodge.trace_criterion(1)["interior_max"] < 1e-8
        assert annulus.hodge.trace_criterion(1)["boundary_min"] > 1e-3


class TestDualityAngles:
    """Test Poincare duality angles."""

    def test_punctured_torus_angles_are_acute(self, punctured_torus):
        """Test two angles with cosines strictly inside (0, 1)."""
        angles = punctured_torus.hodge.poincare_duality_angles(1)
        assert len(angles) == 2
        assert np.all(angles.cosines > 1e-8)
        assert np.all(angles.cosines < 1 - 1e-8)
        assert np.all(np.diff(angles.cosines) <= 0)

    def test_annulus_has_none(self, annulus):
        """Test the annulus has no duality angle in degree 1."""
        assert len(annulus.hodge.poincare_duality_angles(1)) == 0

    def test_closed_manifold_angles_vanish(self, flat_torus):
        """Test H_N = H_D on the flat torus, so every cosine is 1."""
        angles = flat_torus.hodge.poincare_duality_angles(1)
        assert len(angles) == 2
        assert np.allclose(angles.cosines, 1.0)

    @pytest.mark.slow
    def test_angles_converge_under_refinement(self):
        """Test successive differences of the torus angles shrink."""
        from pdangles.forms import DiscreteForms
        from pdangles.hodge import HodgeDecomposition
        from pdangles.mesh import generate_punctured_torus

        cosines = []
        for divisions, hole in ((6, 2), (12, 4), (24, 8)):
            forms = DiscreteForms(*generate_punctured_torus(divisions, hole))
            cosines.append(HodgeDecomposition(forms).poincare_duality_angles(1).cosines)
        first = np.max(np.abs(cosines[1] - cosines[0]))
        second = np.max(np.abs(cosines[2] - cosines[1]))
        assert second < first


class TestDecompositions:
    """Test Morrey and five-term decompositions."""

    def test_morrey_orthogonal_and_complete(self, punctured_torus, rng):
        """Test the three parts are orthogonal and sum to the input."""
        forms, hodge = punctured_torus.forms, punctured_torus.hodge
        omega = forms.random(1, rng)
        parts = hodge.morrey_decompose(omega)
        scale = forms.norm(omega) ** 2
        assert abs(forms.inner_product(parts.coexact_n, parts.harmonic)) < 1e-9 * scale
        assert abs(forms.inner_product(parts.harmonic, parts.exact_d)) < 1e-9 * scale
        assert abs(forms.inner_product(parts.coexact_n, parts.exact_d)) < 1e-9 * scale
        rebuilt = parts.coexact_n + parts.harmonic + parts.exact_d
        assert np.allclose(rebuilt.values, omega.values)

    def test_morrey_idempotent(self, annulus, rng):
        """Test decomposing a component returns the component."""
        forms, hodge = annulus.forms, annulus.hodge
        harmonic = hodge.morrey_decompose(forms.random(1, rng)).harmonic
        again = hodge.morrey_decompose(harmonic)
        assert forms.norm(again.harmonic - harmonic) < 1e-9 * forms.norm(harmonic)
        assert forms.norm(again.exact_d) < 1e-9 * forms.norm(harmonic)

    def test_five_terms_sum(self, punctured_torus, rng):
        """Test the five parts reassemble the input."""
        forms, hodge = punctured_torus.forms, punctured_torus.hodge
        omega = forms.random(1, rng)
        parts = hodge.five_term_decompose(omega)
        total = parts.parts()[0]
        for part in parts.parts()[1:]:
            total = total + part
        assert np.allclose(total.values, omega.values)

    def test_projection_idempotent(self, punctured_torus, rng):
        """Test projecting onto H_N twice changes nothing."""
        forms, hodge = punctured_torus.forms, punctured_torus.hodge
        once = hodge.project_neumann(forms.random(1, rng))
        twice = hodge.project_neumann(once)
        assert np.allclose(once.values, twice.values)

    @pytest.mark.parametrize("mesh", ["annulus", "punctured_torus"])
    def test_orthogonality_battery(self, mesh, request, rng):
        """Test every orthogonality residual of the decompositions."""
        hodge = request.getfixturevalue(mesh).hodge
        for p in range(3):
            residuals = hodge.orthogonality_residuals(p, rng)
            assert max(residuals.values()) < 1e-9, residuals


class TestSubspaces:
    """Test principal angles and subspace distances."""

    def test_identical_subspaces(self, punctured_torus):
        """Test a subspace against itself."""
        forms, hodge = punctured_torus.forms, punctured_torus.hodge
        basis = hodge.harmonic_neumann_fields(1)
        angles = principal_angles(basis, basis, forms.mass(1))
        assert np.allclose(angles.cosines, 1.0)
        assert subspace_distance(basis, basis, forms.mass(1)) < 1e-10

    def test_euclidean_angles(self):
        """Test the angle between two lines in the plane."""
        a = np.array([[1.0], [0.0]])
        b = np.array([[np.cos(0.3)], [np.sin(0.3)]])
        assert principal_angles(a, b).angles[0] == pytest.approx(0.3)
        assert subspace_distance(a, b) == pytest.approx(np.sin(0.3))

    def test_non_orthonormal_rejected(self):
        """Test bases must be orthonormal."""
        with pytest.raises(ParameterError):
            principal_angles(np.array([[2.0], [0.0]]), np.array([[1.0], [0.0]]))

    def test_dimension_mismatch_distance(self):
        """Test subspaces of different dimension are at distance 1."""
        assert subspace_distance(np.eye(3)[:, :1], np.eye(3)[:, :2]) == 1.0


class TestReport:
    """Test the JSON-ready report."""

    def test_report_fields(self, punctured_torus):
        """Test the report carries dimensions, expected values and cosines."""
        report = punctured_torus.hodge.report(1)
        assert report["dimensions"]["H_N"] == report["expected"]["H_N"] == 2
        assert report["dimensions"]["EdH_N"] == 2
        assert len(report["cosines"]) == 2
