# this_file: tests/test_dtn.py
"""Unit tests for the Dirichlet-to-Neumann operator, the Hilbert transform and the cup product."""

import numpy as np
import pytest
from scipy import linalg

from pdangles.dtn import (
    DtNSolver,
    cup_product_reconstruct,
    dtn_report,
    exact_coexact_residual,
    g_image_report,
    g_operator,
    g_target,
    hilbert_transform,
    mixed_primitives_residual,
    smooth_exact_fields,
    square_sign,
    t_projection_dirichlet_residual,
    t_projection_reference_residual,
    t_projection_residual,
    t_squared,
    well_definedness_residual,
)
from pdangles.errors import DegreeError, MeshValidationError
from pdangles.forms import Carrier, DiscreteForms
from pdangles.hodge import HodgeDecomposition
from pdangles.mesh import generate_annulus, generate_punctured_torus


def _build(complex_, geometry) -> tuple[DtNSolver, HodgeDecomposition]:
    forms = DiscreteForms(complex_, geometry)
    return DtNSolver(forms), HodgeDecomposition(forms)


def _relative_miss(forms, left: np.ndarray, right: np.ndarray, p: int) -> float:
    mass = forms.mass(p, Carrier.BOUNDARY)
    miss = left - right
    return float(np.sqrt(max(miss @ mass @ miss, 0.0)) / np.sqrt(max(right @ mass @ right, 1e-300)))


class TestDtNOperator:
    """Test assembly and basic properties of Lambda_p."""

    def test_closed_mesh_rejected(self, flat_torus):
        """Test a mesh without boundary has no DtN operator."""
        with pytest.raises(MeshValidationError):
            DtNSolver(flat_torus.forms)

    def test_degree_range(self, annulus):
        """Test boundary degrees stop at n - 1."""
        with pytest.raises(DegreeError):
            annulus.solver.operator(2)

    @pytest.mark.parametrize("p", [0, 1])
    def test_stiffness_symmetric_psd(self, annulus, p):
        """Test the stiffness form is symmetric and positive semi-definite."""
        operator = annulus.solver.operator(p)
        scale = np.max(np.abs(operator.stiffness))
        assert operator.asymmetry < 1e-8 * scale
        assert np.min(np.linalg.eigvalsh(operator.stiffness)) > -1e-9 * scale

    @pytest.mark.parametrize("mesh", ["annulus", "punctured_torus"])
    def test_exact_forms_annihilated(self, mesh, request, rng):
        """Test Lambda vanishes on exact boundary forms."""
        solver = request.getfixturevalue(mesh).solver
        assert solver.exact_annihilation_residual(1, rng) < 1e-8

    @pytest.mark.parametrize("mesh", ["annulus", "punctured_torus"])
    def test_kernel_is_harmonic_trace_image(self, mesh, request):
        """Test ker Lambda_p equals the traces of harmonic fields."""
        solver = request.getfixturevalue(mesh).solver
        for p in range(2):
            assert solver.kernel_image_distance(p) < 1e-7

    def test_constants_span_degree_zero_kernel(self, annulus):
        """Test ker Lambda_0 on the annulus holds only the global constants."""
        kernel = annulus.solver.kernel(0)
        assert kernel.shape[1] == 1
        assert np.ptp(kernel[:, 0]) < 1e-8 * np.max(np.abs(kernel[:, 0]))

    def test_circle_indicator_carries_flux(self, annulus):
        """Test a function constant on each circle but not globally has nonzero flux."""
        forms, solver = annulus.forms, annulus.solver
        indicators = linalg.null_space(forms.incidence(0, Carrier.BOUNDARY))
        assert indicators.shape[1] == 2
        flux = solver.operator(0).matrix @ indicators
        assert np.linalg.matrix_rank(flux, tol=1e-8 * np.max(np.abs(flux))) == 1

    def test_kernel_decomposition(self, annulus):
        """Test ker Lambda_1 splits into exact forms plus the boundary loop."""
        boundary_n, _ = annulus.hodge.interior_boundary_split_N(1)
        decomposition = annulus.solver.kernel_decomposition(1, boundary_n.columns)
        assert decomposition.consistent
        assert decomposition.boundary_dim == 1
        assert decomposition.reconstruction_distance < 1e-7

    def test_bvp_matches_boundary_data(self, annulus, rng):
        """Test the harmonic extension has the prescribed trace."""
        forms, solver = annulus.forms, annulus.solver
        phi = forms.random(1, rng, Carrier.BOUNDARY)
        omega = solver.solve_bvp(1, phi)
        assert np.allclose(forms.tangential_trace(omega).values, phi.values, atol=1e-9)

    def test_inward_is_default(self, annulus):
        """Test the default solver uses the inward normal and outward flips the sign."""
        assert annulus.solver.inward is True
        outward = DtNSolver(annulus.forms, inward=False)
        for p in range(2):
            inward_matrix = annulus.solver.operator(p).matrix
            assert np.allclose(outward.operator(p).matrix, -inward_matrix, atol=1e-12 * np.max(np.abs(inward_matrix)))

    def test_inward_flux_is_negative_energy(self, annulus):
        """Test the total inward flux of the outer-circle indicator is minus its Dirichlet energy."""
        forms, solver = annulus.forms, annulus.solver
        coords = np.asarray(forms.geometry.vertex_coords)[forms.complex.boundary.parent_vertices]
        outer = (np.hypot(coords[:, 0], coords[:, 1]) > 1.5).astype(float)
        operator = solver.operator(0)
        flux = outer @ forms.mass(0, Carrier.BOUNDARY) @ operator.matrix @ outer
        energy = outer @ operator.stiffness @ outer
        assert energy > 0
        assert flux == pytest.approx(-energy, rel=1e-8)


class TestNormalCochains:
    """Test the Riesz form of normal data and its inverse."""

    @pytest.mark.parametrize("p", [0, 1])
    def test_as_normal_cochain_round_trip(self, p, rng):
        """Test the normal cochain of Lambda phi reproduces its Riesz form on odd boundary cycles."""
        solver, _ = _build(*generate_annulus(2, 15, 1.0, 2.0))
        forms = solver.forms
        phi = forms.random(p, rng, Carrier.BOUNDARY)
        riesz = solver.lambda_(p, phi)
        nu = solver.as_normal_cochain(p, riesz)
        assert nu.degree == 1 - p
        assert nu.carrier is Carrier.BOUNDARY
        assert _relative_miss(forms, forms.riesz_matrix(p) @ nu.values, riesz.values, p) < 1e-8

    def test_as_normal_cochain_degree_check(self, annulus, rng):
        """Test a cochain of the wrong degree is refused."""
        forms = annulus.forms
        with pytest.raises(DegreeError):
            annulus.solver.as_normal_cochain(0, forms.random(1, rng, Carrier.BOUNDARY))



class TestFourierCheck:
    """Test Lambda_0 on the disk against k cos(k theta)."""

    def test_low_mode_accurate(self, disk):
        """Test the lowest mode is resolved well and better than a high one."""
        low = disk.solver.lambda0_fourier_error(1)["relative_error"]
        high = disk.solver.lambda0_fourier_error(4)["relative_error"]
        assert low < 0.2
        assert low < high

    def test_outward_convention(self, disk):
        """Test the outward convention only flips the sign."""
        inward = disk.solver.lambda0_fourier_error(2)
        outward = DtNSolver(disk.forms, inward=False).lambda0_fourier_error(2)
        assert inward["inward"] is True
        assert outward["inward"] is False
        assert outward["relative_error"] == pytest.approx(inward["relative_error"])

    def test_needs_planar_mesh(self, punctured_torus):
        """Test the Fourier check refuses meshes without planar coordinates."""
        with pytest.raises(MeshValidationError):
            punctured_torus.solver.lambda0_fourier_error(1)


class TestHilbertTransform:
    """Test T, its square and the projection identities."""

    @pytest.mark.parametrize(("n", "p", "sign"), [(2, 1, -1.0), (3, 1, -1.0), (3, 2, -1.0), (4, 2, 1.0), (4, 1, -1.0), (6, 2, 1.0)])
    def test_square_sign(self, n, p, sign):
        """Test the sign (-1)^(np+n+p)."""
        assert square_sign(n, p) == sign

    def test_degree_zero_rejected(self, annulus):
        """Test T is only defined for 1 <= p <= n - 1."""
        with pytest.raises(DegreeError):
            hilbert_transform(annulus.solver, 0)

    def test_t_squared_matches_cosines(self, punctured_torus):
        """Test T^2 on i*H_N is negative on surfaces and close to minus the squared cosines."""
        hodge, solver = punctured_torus.hodge, punctured_torus.solver
        cosines = hodge.poincare_duality_angles(1).cosines
        spectrum = t_squared(solver, 1, hodge.harmonic_neumann_fields(1).columns, cosines)
        assert spectrum.sign == -1.0
        assert spectrum.cosines_squared.size == 2
        assert np.all(spectrum.discrepancies < spectrum.cosines_squared)

    def test_t_squared_vanishes_on_annulus_loop(self, annulus):
        """Test the boundary loop of the annulus lies in the kernel of T^2."""
        hodge, solver = annulus.hodge, annulus.solver
        spectrum = t_squared(solver, 1, hodge.harmonic_neumann_fields(1).columns, np.zeros(0))
        assert spectrum.cosines_squared.size == 0
        assert spectrum.max_error < 1e-8

    @pytest.mark.slow
    def test_t_squared_converges(self):
        """Test the T^2 spectrum error shrinks under uniform refinement."""
        errors = []
        for divisions, hole in ((8, 2), (16, 4)):
            solver, hodge = _build(*generate_punctured_torus(divisions, hole))
            cosines = hodge.poincare_duality_angles(1).cosines
            errors.append(t_squared(solver, 1, hodge.harmonic_neumann_fields(1).columns, cosines).max_error)
        assert errors[1] < errors[0]

    def test_minus_identity_on_exact_coexact(self, annulus):
        """Test T^2 is close to minus the identity on smooth traces of EcE."""
        solver = annulus.solver
        fields = smooth_exact_fields(solver, 1)
        assert fields.shape[1] == 4
        assert exact_coexact_residual(solver, 1, fields) < 0.25

    @pytest.mark.slow
    def test_exact_coexact_converges(self):
        """Test the T^2 = -1 error on smooth exact traces shrinks under refinement."""
        errors = []
        for n_radial, n_angular in ((2, 12), (4, 24)):
            solver, _ = _build(*generate_annulus(n_radial, n_angular, 1.0, 2.0))
            errors.append(exact_coexact_residual(solver, 1, smooth_exact_fields(solver, 1)))
        assert errors[1] < errors[0]

    def test_exact_projection_identities(self, punctured_torus):
        """Test the least-norm reference against nu(P_D w) and T nu(l) against i*P_N l."""
        hodge, solver = punctured_torus.hodge, punctured_torus.solver
        for omega in hodge.harmonic_neumann_fields(1).cochains():
            assert t_projection_reference_residual(solver, hodge, omega) < 1e-7
        for lam in hodge.harmonic_dirichlet_fields(1).cochains():
            assert t_projection_dirichlet_residual(solver, hodge, lam) < 1e-6

    def test_tangential_projection_on_annulus(self, annulus):
        """Test T i*w and the least-norm reference both vanish for the annulus loop."""
        hodge, solver = annulus.hodge, annulus.solver
        for omega in hodge.harmonic_neumann_fields(1).cochains():
            assert t_projection_residual(solver, omega) < 1e-8

    def test_projection_signs_follow_convention(self, punctured_torus):
        """Test the projection identities hold with the outward normal as well."""
        hodge = punctured_torus.hodge
        solver = DtNSolver(punctured_torus.forms, inward=False)
        for omega in hodge.harmonic_neumann_fields(1).cochains():
            assert t_projection_reference_residual(solver, hodge, omega) < 1e-7
        for lam in hodge.harmonic_dirichlet_fields(1).cochains():
            assert t_projection_dirichlet_residual(solver, hodge, lam) < 1e-6


class TestGOperator:
    """Test G_p = Lambda_p + (-1)^(pn+p+n) d Lambda^-1 d and its image."""

    @pytest.mark.parametrize("mesh", ["annulus", "punctured_torus"])
    def test_top_degree_is_lambda(self, mesh, request):
        """Test G_{n-1} equals Lambda_{n-1}."""
        solver = request.getfixturevalue(mesh).solver
        assert np.array_equal(g_operator(solver, 1), solver.operator(1).matrix)

    @pytest.mark.parametrize("mesh", ["annulus", "punctured_torus"])
    def test_top_degree_image(self, mesh, request):
        """Test im G_{n-1} is the Riesz form of the traces of H^0_N."""
        pipeline = request.getfixturevalue(mesh)
        report = g_image_report(pipeline.solver, 1, pipeline.hodge.harmonic_neumann_fields(0).columns)
        assert report["expected_rank"] == 1
        assert report["distance"] < 1e-7
        assert report["leakage"] < 1e-7

    @pytest.mark.parametrize("mesh", ["annulus", "punctured_torus"])
    def test_vanishes_on_exact_forms(self, mesh, request, rng):
        """Test G_1 vanishes on d of boundary functions, which lie in ker Lambda."""
        pipeline = request.getfixturevalue(mesh)
        forms, solver = pipeline.forms, pipeline.solver
        mu = forms.random(0, rng, Carrier.BOUNDARY)
        exact = forms.incidence(0, Carrier.BOUNDARY) @ mu.values
        image = forms.cochain(1, g_operator(solver, 1) @ exact, Carrier.BOUNDARY)
        assert forms.norm(image) < 1e-8 * forms.norm(forms.cochain(1, exact, Carrier.BOUNDARY))

    def test_equals_lambda_on_closed_data(self, annulus):
        """Test G_0 agrees with Lambda_0 on functions constant on each circle."""
        forms, solver = annulus.forms, annulus.solver
        indicators = linalg.null_space(forms.incidence(0, Carrier.BOUNDARY))
        lam = solver.operator(0).matrix @ indicators
        assert np.allclose(g_operator(solver, 0) @ indicators, lam, atol=1e-10 * np.max(np.abs(lam)))

    def test_closed_data_lands_in_neumann_traces(self, annulus):
        """Test G_0 of the circle indicators is the Riesz form of the loop trace."""
        forms, solver, hodge = annulus.forms, annulus.solver, annulus.hodge
        target = g_target(solver, 0, hodge.harmonic_neumann_fields(1).columns)
        assert target.shape[1] == 1
        mass = forms.mass(0, Carrier.BOUNDARY)
        image = g_operator(solver, 0) @ linalg.null_space(forms.incidence(0, Carrier.BOUNDARY))
        outside = image - target @ (target.T @ (mass @ image))
        assert np.sqrt(np.trace(outside.T @ mass @ outside)) < 1e-6 * np.sqrt(np.trace(image.T @ mass @ image))

    def test_degree_zero_report(self, punctured_torus):
        """Test the report sizes the target by the Neumann 1-fields."""
        pipeline = punctured_torus
        report = g_image_report(pipeline.solver, 0, pipeline.hodge.harmonic_neumann_fields(1).columns)
        assert report["degree"] == 0
        assert report["expected_rank"] == 3
        assert report["leakage"] >= 0.0

    @pytest.mark.slow
    def test_leakage_converges(self):
        """Test the part of im G_0 outside the Neumann traces shrinks under refinement."""
        leakage = []
        for divisions, hole in ((8, 2), (16, 4)):
            solver, hodge = _build(*generate_punctured_torus(divisions, hole))
            leakage.append(g_image_report(solver, 0, hodge.harmonic_neumann_fields(1).columns)["leakage"])
        assert leakage[1] < leakage[0]


class TestCupProduct:
    """Test the boundary reconstruction of the mixed cup product."""

    def test_unit_case_exact(self, annulus):
        """Test constant times a boundary Dirichlet field is reconstructed."""
        hodge, solver = annulus.hodge, annulus.solver
        alpha = hodge.harmonic_neumann_fields(0).cochain(0)
        boundary_d, _ = hodge.interior_boundary_split_D(1)
        result = cup_product_reconstruct(solver, hodge, alpha, boundary_d.cochain(0))
        assert result.residual < 1e-8
        assert result.image_residual < 1e-8

    @pytest.mark.parametrize(("n_radial", "n_angular"), [(2, 12), (4, 24)])
    def test_loop_times_radial_field(self, n_radial, n_angular):
        """Test the product of the Neumann loop with the boundary Dirichlet 1-field on two meshes."""
        solver, hodge = _build(*generate_annulus(n_radial, n_angular, 1.0, 2.0))
        boundary_d, _ = hodge.interior_boundary_split_D(1)
        alphas = list(hodge.harmonic_neumann_fields(1).cochains())
        betas = list(boundary_d.cochains())
        assert len(alphas) == len(betas) == 1
        result = cup_product_reconstruct(solver, hodge, alphas[0], betas[0])
        assert result.residual < 1e-8

    def test_degree_overflow_returns_none(self, annulus):
        """Test p + q > n yields no reconstruction."""
        hodge = annulus.hodge
        alpha = hodge.harmonic_neumann_fields(1).cochain(0)
        beta = hodge.harmonic_dirichlet_fields(2).cochain(0)
        result = cup_product_reconstruct(annulus.solver, hodge, alpha, beta)
        assert result.reconstructed is None
        assert result.direct is None

    def test_kernel_shift_changes_nothing(self, annulus, rng):
        """Test adding an element of ker Lambda_0 to the preimage leaves the product fixed."""
        forms, solver, hodge = annulus.forms, annulus.solver, annulus.hodge
        phi = forms.tangential_trace(hodge.harmonic_neumann_fields(0).cochain(0))
        mu = forms.random(0, rng, Carrier.BOUNDARY)
        sigma = forms.cochain(0, solver.kernel(0)[:, 0], Carrier.BOUNDARY)
        assert well_definedness_residual(solver, phi, mu, sigma) < 1e-8

    @pytest.mark.parametrize("mesh", ["annulus", "punctured_torus"])
    def test_mixed_primitives(self, mesh, request, rng):
        """Test Lambda of the trace of a primitive is the normal trace of the field."""
        pipeline = request.getfixturevalue(mesh)
        for p in (1, 2):
            boundary_d, _ = pipeline.hodge.interior_boundary_split_D(p)
            for beta in boundary_d.cochains():
                assert mixed_primitives_residual(pipeline.solver, beta, rng) < 1e-6


class TestReport:
    """Test the JSON-ready DtN report."""

    def test_degree_one_report(self, punctured_torus):
        """Test the report carries T^2 data and duality cosines in degree 1."""
        report = dtn_report(punctured_torus.solver, punctured_torus.hodge, 1)
        assert report["degree"] == 1
        assert report["inward"] is True
        assert len(report["duality_cosines"]) == 2
        assert report["t_squared"]["sign"] == -1.0
        assert report["t_projection_reference"] < 1e-7
        assert report["g_operator"]["distance"] < 1e-7
        assert report["lambda"]["kernel_image_distance"] < 1e-7

    def test_degree_zero_report(self, annulus):
        """Test degree 0 has no T^2 section and a one-dimensional kernel."""
        report = dtn_report(annulus.solver, annulus.hodge, 0)
        assert "t_squared" not in report
        assert report["lambda"]["kernel_dim"] == 1
        assert report["g_operator"]["expected_rank"] == 1
