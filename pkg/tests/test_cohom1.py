# this_file: tests/test_cohom1.py
"""Unit tests for the cohomogeneity-one duality angles."""

import math

import numpy as np
import pytest

from pdangles.cohom1 import (
    SWEEP_COLUMNS,
    Family,
    FamilyParams,
    Method,
    Role,
    asymptotic_exponent,
    closed_form_angle,
    closed_form_solution,
    closing_exponent,
    compare,
    default_radii,
    exponent_study,
    integrate,
    normalization_constants,
    numeric_angle,
    ode_residual,
    one_minus_cos,
    parameter_grid,
    profile_error,
    solve_radial,
    sweep,
    weighted_l2,
)
from pdangles.errors import ParameterError, UnderflowError

SAMPLES = [
    FamilyParams(Family.CPN, 2, 1, 0.3),
    FamilyParams(Family.CPN, 4, 1, 0.7),
    FamilyParams(Family.GRASSMANN, 3, 1, 0.3),
    FamilyParams(Family.GRASSMANN, 5, 2, 1.2),
]


class TestFamilyParams:
    """Test parameter validation."""

    def test_family_from_string(self):
        """Test case-insensitive family names."""
        assert FamilyParams("CPN", 3, 1, 0.5).family is Family.CPN

    def test_unknown_family(self):
        """Test unknown family names are rejected."""
        with pytest.raises(ParameterError, match="unknown family"):
            Family.from_string("sphere")

    @pytest.mark.parametrize(
        ("family", "n", "k", "r", "m"),
        [
            (Family.CPN, 1, 1, 0.5, 1),
            (Family.CPN, 3, 0, 0.5, 1),
            (Family.CPN, 3, 3, 0.5, 1),
            (Family.GRASSMANN, 3, 1, 0.0, 1),
            (Family.GRASSMANN, 3, 1, math.pi / 2, 1),
            (Family.LENS, 3, 1, 0.5, 0),
            (Family.CPN, 3, 1, 0.5, 2),
        ],
    )
    def test_invalid(self, family, n, k, r, m):
        """Test out-of-range parameters raise ParameterError."""
        with pytest.raises(ParameterError):
            FamilyParams(family, n, k, r, m)

    def test_validate_collects_all(self):
        """Test several violations are reported together."""
        with pytest.raises(ParameterError, match="r must lie"):
            FamilyParams(Family.CPN, 1, 1, 2.0)


class TestClosedForm:
    """Test the closed-form angle."""

    def test_grassmann_two(self):
        """Test the oriented 2-plane Grassmannian at r = pi/4 gives 1/3."""
        result = closed_form_angle(FamilyParams(Family.GRASSMANN, 2, 1, math.pi / 4))
        assert result.cos_theta == pytest.approx(1 / 3, abs=1e-15)
        assert result.method is Method.CLOSED_FORM

    def test_grassmann_two_formula(self):
        """Test agreement with cos^2 r / (1 + sin^2 r) across radii."""
        for r in np.linspace(0.02, math.pi / 2 - 0.02, 25):
            expected = math.cos(r) ** 2 / (1 + math.sin(r) ** 2)
            assert closed_form_angle(FamilyParams(Family.GRASSMANN, 2, 1, float(r))).cos_theta == pytest.approx(
                expected, abs=1e-12
            )

    def test_monotone_in_radius(self):
        """Test the angle grows with the tube radius."""
        radii = np.linspace(0.05, math.pi / 2 - 0.01, 100)
        cosines = [closed_form_angle(FamilyParams(Family.CPN, 3, 1, float(r))).cos_theta for r in radii]
        assert np.all(np.diff(cosines) <= 0)

    @pytest.mark.parametrize("family", [Family.CPN, Family.GRASSMANN])
    def test_k_symmetry(self, family):
        """Test k and n - k give the same angle."""
        for k in range(1, 5):
            a = closed_form_angle(FamilyParams(family, 5, k, 0.6)).cos_theta
            b = closed_form_angle(FamilyParams(family, 5, 5 - k, 0.6)).cos_theta
            assert a == pytest.approx(b, abs=1e-14)

    def test_lens_independent_of_m(self):
        """Test the lens angle matches CP^n for every m."""
        reference = closed_form_angle(FamilyParams(Family.CPN, 3, 1, 0.5)).cos_theta
        for m in (1, 2, 7):
            assert closed_form_angle(FamilyParams(Family.LENS, 3, 1, 0.5, m)).cos_theta == reference

    def test_limits(self):
        """Test cos tends to 1 for thin tubes and to 0 near pi/2."""
        assert closed_form_angle(FamilyParams(Family.CPN, 2, 1, 1e-4)).cos_theta == pytest.approx(1.0)
        assert closed_form_angle(FamilyParams(Family.CPN, 2, 1, math.pi / 2 - 1e-6)).cos_theta < 1e-10

    def test_one_minus_cos_consistent(self):
        """Test the cancellation-free gap agrees with 1 - cos where both are accurate."""
        params = FamilyParams(Family.GRASSMANN, 4, 1, 0.8)
        assert one_minus_cos(params) == pytest.approx(1 - closed_form_angle(params).cos_theta, rel=1e-12)

    def test_one_minus_cos_tiny(self):
        """Test the gap stays positive where cos rounds to 1."""
        params = FamilyParams(Family.CPN, 3, 1, 1e-3)
        assert closed_form_angle(params).cos_theta == 1.0
        assert 0.0 < one_minus_cos(params) < 1e-16

    @pytest.mark.parametrize("params", SAMPLES + [FamilyParams(Family.LENS, 3, 2, 0.4, 3)])
    def test_normalization_constants(self, params):
        """Test C_N C_D Q <N, D> reproduces the closed-form cosine."""
        constants = normalization_constants(params)
        assert constants["cos_theta"] == pytest.approx(closed_form_angle(params).cos_theta, rel=1e-12)
        assert constants["C_N"] > 0
        assert constants["C_D"] > 0

    def test_lens_volume_divided_by_m(self):
        """Test the lens bundle volume is the sphere volume over m."""
        single = normalization_constants(FamilyParams(Family.LENS, 2, 1, 0.5, 1))
        triple = normalization_constants(FamilyParams(Family.LENS, 2, 1, 0.5, 3))
        assert triple["volume"] == pytest.approx(single["volume"] / 3)
        assert single["volume"] == pytest.approx(2 * math.pi**2)


class TestRadialSolver:
    """Test shooting solutions and the weighted inner product."""

    @pytest.mark.parametrize("params", SAMPLES)
    @pytest.mark.parametrize("role", [Role.NEUMANN, Role.DIRICHLET])
    def test_shooting_matches_closed_form(self, params, role):
        """Test shooting profiles solve the ODE and agree with the closed form."""
        solution = solve_radial(params, role)
        assert ode_residual(solution) < 1e-9
        assert profile_error(solution) < 1e-8

    @pytest.mark.parametrize("params", SAMPLES)
    def test_unit_norm(self, params):
        """Test normalized solutions have unit weighted norm."""
        solution = solve_radial(params, Role.NEUMANN)
        assert weighted_l2(params, solution, solution) == pytest.approx(1.0, abs=1e-9)

    def test_closed_form_solution_has_no_residual(self):
        """Test closed-form solutions skip the ODE residual."""
        solution = closed_form_solution(SAMPLES[0], Role.DIRICHLET)
        assert ode_residual(solution) == 0.0

    def test_mismatched_parameters(self):
        """Test inner products need solutions of one family member."""
        a = closed_form_solution(SAMPLES[0], Role.NEUMANN)
        b = closed_form_solution(SAMPLES[1], Role.NEUMANN)
        with pytest.raises(ParameterError):
            weighted_l2(SAMPLES[0], a, b)

    def test_quadrature_polynomial(self):
        """Test composite Gauss-Legendre on a smooth integrand."""
        value, difference = integrate(np.sin, 0.0, math.pi)
        assert value == pytest.approx(2.0, abs=1e-13)
        assert difference < 1e-11


class TestNumericAngle:
    """Test the shooting-plus-quadrature route against the closed form."""

    @pytest.mark.parametrize("params", SAMPLES)
    def test_agreement(self, params):
        """Test both routes agree to 1e-8."""
        result = numeric_angle(params)
        assert result.method is Method.ODE_QUADRATURE
        assert result.cos_theta == pytest.approx(closed_form_angle(params).cos_theta, abs=1e-8)

    def test_compare_row(self):
        """Test a sweep row carries every column."""
        row = compare(SAMPLES[0])
        assert tuple(row) == SWEEP_COLUMNS
        assert row["abs_diff"] < 1e-8

    def test_parameter_grid(self):
        """Test grid order and that m only multiplies the lens family."""
        grid = parameter_grid([Family.CPN, Family.LENS], [2, 3], [0.5], ms=(1, 2))
        assert [(p.family, p.n, p.k, p.m) for p in grid] == [
            (Family.CPN, 2, 1, 1),
            (Family.CPN, 3, 1, 1),
            (Family.CPN, 3, 2, 1),
            (Family.LENS, 2, 1, 1),
            (Family.LENS, 2, 1, 2),
            (Family.LENS, 3, 1, 1),
            (Family.LENS, 3, 1, 2),
            (Family.LENS, 3, 2, 1),
            (Family.LENS, 3, 2, 2),
        ]

    def test_serial_sweep_order(self):
        """Test serial sweeps return rows in grid order."""
        grid = parameter_grid([Family.GRASSMANN], [2, 3], [0.3, 0.9])
        rows = sweep(grid, workers=1)
        assert [(row["n"], row["k"], row["r"]) for row in rows] == [(p.n, p.k, p.r) for p in grid]
        assert max(row["abs_diff"] for row in rows) < 1e-8


class TestAsymptotics:
    """Test log-log exponents."""

    @pytest.mark.parametrize(("family", "n"), [(Family.CPN, 2), (Family.CPN, 3), (Family.GRASSMANN, 3), (Family.GRASSMANN, 4)])
    def test_small_radius_slope(self, family, n):
        """Test 1 - cos decays like r^(2n) or r^n, and theta at half that rate."""
        fit = asymptotic_exponent(family, n, 1, default_radii())
        assert fit.rel_err < 0.02
        assert fit.theta_slope == pytest.approx(fit.expected / 2, rel=0.02)

    def test_lens_slope(self):
        """Test the lens bundles share the CP^n exponent."""
        fit = asymptotic_exponent("lens", 3, 1, default_radii())
        assert fit.expected == 6.0
        assert fit.rel_err < 0.02

    @pytest.mark.parametrize("family", [Family.CPN, Family.GRASSMANN])
    def test_closing_slope(self, family):
        """Test cos vanishes quadratically as the tube closes up."""
        u_grid = np.geomspace(1e-3, 1e-2, 6)
        assert closing_exponent(family, 3, 1, u_grid) == pytest.approx(2.0, rel=0.02)

    def test_study_order(self):
        """Test one fit per (family, n, k) in order."""
        fits = exponent_study([Family.GRASSMANN], [2, 3], default_radii())
        assert [(f.n, f.k) for f in fits] == [(2, 1), (3, 1), (3, 2)]
        assert set(fits[0].to_dict()) >= {"slope", "theta_slope", "theta_expected", "closing_slope"}

    def test_short_grid(self):
        """Test fewer than five radii are refused."""
        with pytest.raises(ParameterError, match="at least 5"):
            asymptotic_exponent(Family.CPN, 2, 1, [0.01, 0.02, 0.03, 0.04])

    def test_grid_out_of_range(self):
        """Test radii above 0.1 are refused."""
        with pytest.raises(ParameterError):
            asymptotic_exponent(Family.CPN, 2, 1, [0.01, 0.02, 0.03, 0.04, 0.5])

    def test_underflow(self):
        """Test gaps below the smallest double raise UnderflowError."""
        with pytest.raises(UnderflowError):
            asymptotic_exponent(Family.CPN, 8, 1, np.geomspace(1e-30, 1e-25, 5))
