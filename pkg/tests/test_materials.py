"""Closed-form coefficient formulas and material validation."""

import math

import pytest

from elastic_weyl import (
    BoundaryCondition,
    DomainGeometry,
    NonConvexError,
    assemble_coefficients,
    boundary_weyl_constant,
    bulk_weyl_constant,
    half_integer_gamma,
    validate_material,
)

DF, FD = BoundaryCondition.DF, BoundaryCondition.FD

VALID_PARAMS = [(0.0, 1.0), (1.0, 1.0), (2.0, 0.5), (-0.2, 1.0), (3.7, 0.2)]


class TestValidation:
    def test_accepts_zero_lambda(self):
        p = validate_material(0.0, 1.0, 2)
        assert p.lam == 0.0 and p.mu == 1.0

    def test_accepts_positive(self):
        assert validate_material(2.0, 1.0, 3).p_modulus == 4.0

    def test_rejects_boundary_case(self):
        # d*lam + 2*mu = 0 sits outside the strict inequality
        with pytest.raises(NonConvexError):
            validate_material(-1.0, 1.0, 2)

    def test_rejects_nonpositive_mu(self):
        with pytest.raises(NonConvexError):
            validate_material(0.0, 0.0, 2)
        with pytest.raises(NonConvexError):
            validate_material(0.0, -1.0, 3)

    def test_error_names_inequality(self):
        with pytest.raises(NonConvexError, match="mu > 0"):
            validate_material(0.0, -1.0, 2)
        with pytest.raises(NonConvexError, match="2\\*mu > 0"):
            validate_material(-5.0, 1.0, 3)


class TestHalfIntegerGamma:
    def test_against_math_gamma(self):
        for two_x in range(1, 62):
            x = two_x / 2.0
            assert half_integer_gamma(x) == pytest.approx(
                math.gamma(x), rel=1e-14
            )

    def test_rejects_non_half_integers(self):
        with pytest.raises(ValueError):
            half_integer_gamma(0.75)
        with pytest.raises(ValueError):
            half_integer_gamma(0.0)


class TestBulkConstant:
    def test_d2_reference_value(self):
        p = validate_material(0.0, 1.0, 2)
        assert bulk_weyl_constant(p, 2) == pytest.approx(3.0 / (8.0 * math.pi),
                                                         rel=1e-14)

    def test_d3_reference_value(self):
        p = validate_material(0.0, 1.0, 3)
        want = (2.0 + 2.0**-1.5) / (6.0 * math.pi**2)
        assert bulk_weyl_constant(p, 3) == pytest.approx(want, rel=1e-14)

    def test_homogeneity_degree(self):
        t = 4.0
        for lam, mu in VALID_PARAMS:
            for d in (2, 3, 4, 5):
                p = validate_material(lam, mu, d)
                pt = validate_material(t * lam, t * mu, d)
                assert bulk_weyl_constant(pt, d) == pytest.approx(
                    t ** (-d / 2.0) * bulk_weyl_constant(p, d), rel=1e-13
                )

    def test_positive_and_monotone(self):
        # decreasing in mu at fixed lam+2mu, and in lam+2mu at fixed mu
        for d in (2, 3, 4, 5):
            for lam, mu in VALID_PARAMS:
                p = validate_material(lam, mu, d)
                a = bulk_weyl_constant(p, d)
                assert a > 0
                big_m = p.p_modulus
                mu2 = mu * 1.25
                if d * (big_m - 2 * mu2) + 2 * mu2 > 0:
                    p_mu = validate_material(big_m - 2 * mu2, mu2, d)
                    assert bulk_weyl_constant(p_mu, d) < a
                p_m = validate_material(lam + 0.5, mu, d)
                assert bulk_weyl_constant(p_m, d) < a


class TestBoundaryDensity:
    def test_d2_df_reference_value(self):
        p = validate_material(0.0, 1.0, 2)
        want = (1.0 - 1.0 / math.sqrt(2.0)) / (4.0 * math.pi)
        assert boundary_weyl_constant(p, 2, DF) == pytest.approx(want, rel=1e-13)

    def test_d3_df_reference_value(self):
        p = validate_material(0.0, 1.0, 3)
        assert boundary_weyl_constant(p, 3, DF) == pytest.approx(
            -1.0 / (32.0 * math.pi), rel=1e-14
        )

    def test_fd_is_exactly_minus_df(self):
        for lam, mu in VALID_PARAMS:
            for d in (2, 3, 4, 5, 6):
                p = validate_material(lam, mu, d)
                assert boundary_weyl_constant(p, d, FD) == -boundary_weyl_constant(
                    p, d, DF
                )

    def test_sign_ordering(self):
        # d=2: b_FD < 0 < b_DF; d>=3: b_DF < 0 < b_FD
        for lam, mu in VALID_PARAMS:
            p2 = validate_material(lam, mu, 2)
            assert boundary_weyl_constant(p2, 2, FD) < 0 < boundary_weyl_constant(p2, 2, DF)
            for d in (3, 4, 5):
                p = validate_material(lam, mu, d)
                assert boundary_weyl_constant(p, d, DF) < 0 < boundary_weyl_constant(p, d, FD)


class TestAssembly:
    def test_2d_cylinder_boundary_term(self):
        # height-pi 2d cylinder: boundary length 4*pi turns the density into
        # the closed-form coefficient 1 - 1/sqrt(2)
        p = validate_material(0.0, 1.0, 2)
        geom = DomainGeometry(2, 2.0 * math.pi, 4.0 * math.pi)
        co = assemble_coefficients(p, 2, DF, geom)
        assert co.second == pytest.approx(1.0 - 1.0 / math.sqrt(2.0), rel=1e-13)

    def test_3d_cylinder_boundary_term(self):
        p = validate_material(0.0, 1.0, 3)
        geom = DomainGeometry(3, 4.0 * math.pi**2, 8.0 * math.pi**2)
        co = assemble_coefficients(p, 3, FD, geom)
        assert co.second == pytest.approx(math.pi / 4.0, rel=1e-13)

    def test_reduced_ratio_exact(self):
        for lam, mu in VALID_PARAMS:
            for d in (2, 3, 4, 5):
                p = validate_material(lam, mu, d)
                geom = DomainGeometry(d, 2.3, 1.7)
                for bc in (DF, FD):
                    co = assemble_coefficients(p, d, bc, geom)
                    assert co.second_reduced == 0.5 * (d - 1) * co.second
                    assert co.leading == co.a * geom.volume

    def test_dimension_mismatch(self):
        p = validate_material(0.0, 1.0, 2)
        with pytest.raises(ValueError, match="dimension"):
            assemble_coefficients(p, 3, DF, DomainGeometry(2, 1.0, 1.0))

    def test_geometry_validation(self):
        with pytest.raises(ValueError):
            DomainGeometry(1, 1.0, 1.0)
        with pytest.raises(ValueError):
            DomainGeometry(2, -1.0, 1.0)
        with pytest.raises(ValueError):
            DomainGeometry(2, 1.0, 0.0)
