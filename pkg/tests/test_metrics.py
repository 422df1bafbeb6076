"""Metric computations: two Bergman routes, Caratheodory closed forms."""

import math

import numpy as np
import pytest

from bcmetrics import (
    BallAutomorphism,
    DegenerateGramError,
    MODE_EXACT,
    UnsupportedDomainError,
    ball,
    bergman_maximizer,
    bergman_metric_hessian,
    build_basis,
    caratheodory_exact,
    caratheodory_minimax,
    deriv_in_span,
    eval_in_span,
    kernel_diag,
    lu_gap,
    minimal_interpolant,
    polydisc,
    sample_boundary,
    tangent,
    unit_bidisc,
)
from bcmetrics.bergman import basis_deriv_values, basis_values

PI = math.pi


def log_hessian_oracle(log_kernel, z, x, step=1e-4):
    """Second mixed derivative of log K along the complex line z + t*x.

    Five-point Laplacian stencil in the complex t plane; the quarter
    Laplacian equals the mixed Wirtinger derivative.
    """

    def f(t):
        return log_kernel(z + t * x)

    lap = (f(step) + f(-step) + f(1j * step) + f(-1j * step) - 4.0 * f(0.0)) / step**2
    return math.sqrt(0.25 * lap)


def disc_log_kernel(z):
    return -math.log(PI) - 2.0 * math.log(1.0 - abs(z[0]) ** 2)


def bidisc_log_kernel(z):
    return -2 * math.log(PI) - 2.0 * sum(math.log(1.0 - abs(v) ** 2) for v in z)


def ball2_log_kernel(z):
    return math.log(2.0 / PI**2) - 3.0 * math.log(1.0 - float(np.vdot(z, z).real))


class TestBergmanHessian:
    def test_disc_center(self, basis_disc40):
        t = tangent([0.0], [1.0])
        value = bergman_metric_hessian(basis_disc40, t)
        assert value == pytest.approx(math.sqrt(2), rel=1e-12)
        oracle = log_hessian_oracle(disc_log_kernel, np.zeros(1), np.ones(1))
        assert value == pytest.approx(oracle, rel=1e-6)

    def test_bidisc_center_unit_direction(self, basis_bidisc8, rng):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        x /= np.linalg.norm(x)
        value = bergman_metric_hessian(basis_bidisc8, tangent(np.zeros(2), x))
        assert value == pytest.approx(math.sqrt(2), rel=1e-12)

    def test_ball_center_unit_direction(self, basis_ball8, rng):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        x /= np.linalg.norm(x)
        value = bergman_metric_hessian(basis_ball8, tangent(np.zeros(2), x))
        assert value == pytest.approx(math.sqrt(3), rel=1e-12)
        oracle = log_hessian_oracle(ball2_log_kernel, np.zeros(2), x)
        assert value == pytest.approx(oracle, rel=1e-6)

    def test_away_from_center_matches_closed_form_hessian(self):
        basis = build_basis(unit_bidisc(), 24)
        z = np.array([0.4 - 0.1j, 0.2 + 0.3j])
        x = np.array([0.6 + 0.2j, -0.5 + 0.7j])
        value = bergman_metric_hessian(basis, tangent(z, x))
        oracle = log_hessian_oracle(bidisc_log_kernel, z, x)
        assert value == pytest.approx(oracle, rel=1e-6)

    def test_zero_direction_gives_zero(self, basis_ball8):
        assert bergman_metric_hessian(basis_ball8, tangent([0.1, 0.2], [0.0, 0.0])) == 0.0

    def test_degenerate_at_degree_zero(self, bidisc):
        basis = build_basis(bidisc, 0)
        with pytest.raises(DegenerateGramError, match="degree_cap=0"):
            bergman_metric_hessian(basis, tangent(np.zeros(2), [1.0, 0.0]))

    def test_homogeneity_in_direction(self, basis_ball8, rng):
        z = np.array([0.25 + 0.1j, -0.3j])
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        base = bergman_metric_hessian(basis_ball8, tangent(z, x))
        for lam in (2.0, -0.5, 1.3 - 0.7j):
            scaled = bergman_metric_hessian(basis_ball8, tangent(z, lam * x))
            assert scaled == pytest.approx(abs(lam) * base, rel=1e-10)


class TestMinimalInterpolant:
    def test_bidisc_center_norm(self, basis_bidisc8):
        result = minimal_interpolant(basis_bidisc8, tangent(np.zeros(2), [1.0, 0.0]))
        assert result.norm == pytest.approx(PI / math.sqrt(2), rel=1e-12)
        assert result.metric_value == pytest.approx(math.sqrt(2), rel=1e-12)

    def test_ball_center_norm(self, basis_ball8, rng):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        x /= np.linalg.norm(x)
        result = minimal_interpolant(basis_ball8, tangent(np.zeros(2), x))
        assert result.norm == pytest.approx(PI / math.sqrt(6), rel=1e-12)

    def test_direction_scaling_halves_norm(self, basis_ball8):
        x = np.array([0.3 + 0.4j, -0.8j])
        base = minimal_interpolant(basis_ball8, tangent(np.zeros(2), x))
        doubled = minimal_interpolant(basis_ball8, tangent(np.zeros(2), 2.0 * x))
        assert doubled.norm == pytest.approx(base.norm / 2.0, rel=1e-12)

    def test_route_equivalence_at_random_tangents(self, basis_egg10, rng):
        for _ in range(10):
            z = 0.5 * (rng.standard_normal(2) + 1j * rng.standard_normal(2)) / 2
            x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            t = tangent(z, x)
            result = minimal_interpolant(basis_egg10, t)
            k = kernel_diag(basis_egg10, z)
            b = bergman_metric_hessian(basis_egg10, t)
            assert math.sqrt(k) * b * result.norm == pytest.approx(1.0, abs=1e-9)

    def test_zero_direction_rejected(self, basis_ball8):
        with pytest.raises(ValueError, match="nonzero"):
            minimal_interpolant(basis_ball8, tangent(np.zeros(2), [0.0, 0.0]))

    def test_degree_zero_rank_error(self, disc):
        basis = build_basis(disc, 0)
        with pytest.raises(DegenerateGramError):
            minimal_interpolant(basis, tangent([0.0], [1.0]))


class TestBergmanMaximizer:
    def test_bidisc_center_coefficients(self, basis_bidisc8):
        x = np.array([np.sqrt(0.8), np.sqrt(0.2) * np.exp(0.4j)])
        coeffs = bergman_maximizer(basis_bidisc8, tangent(np.zeros(2), x))
        expected = np.zeros(basis_bidisc8.size, dtype=complex)
        expected[1] = np.conj(x[0])
        expected[2] = np.conj(x[1])
        assert np.max(np.abs(coeffs - expected)) < 1e-12

    def test_ball_center_coefficients(self, basis_ball8, rng):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        x /= np.linalg.norm(x)
        coeffs = bergman_maximizer(basis_ball8, tangent(np.zeros(2), x))
        expected = np.zeros(basis_ball8.size, dtype=complex)
        expected[1] = np.conj(x[0])
        expected[2] = np.conj(x[1])
        assert np.max(np.abs(coeffs - expected)) < 1e-12

    def test_disc_center_single_coefficient(self, basis_disc40):
        coeffs = bergman_maximizer(basis_disc40, tangent([0.0], [1.0]))
        assert coeffs[1] == pytest.approx(1.0, rel=1e-13)
        assert np.max(np.abs(np.delete(coeffs, 1))) < 1e-13

    def test_unit_norm_vanishing_and_positive_derivative(self, basis_egg10):
        t = tangent([0.3, 0.2 - 0.1j], [0.5 - 0.2j, 1.0j])
        coeffs = bergman_maximizer(basis_egg10, t)
        assert np.linalg.norm(coeffs) == pytest.approx(1.0, abs=1e-12)
        assert abs(eval_in_span(basis_egg10, coeffs, t.z)) < 1e-12
        deriv = deriv_in_span(basis_egg10, coeffs, t)
        assert deriv.imag == pytest.approx(0.0, abs=1e-12)
        assert deriv.real > 0.0

    def test_orthogonal_to_vanishing_subspace(self, basis_ball8, rng):
        # build a basis of {f : f(z) = 0, (Xf)(z) = 0} by constraint
        # elimination against two pivot coordinates, then test orthogonality
        z = np.array([0.2 + 0.1j, -0.15j])
        x = np.array([0.7, 0.5 - 0.3j])
        t = tangent(z, x)
        maximizer = bergman_maximizer(basis_ball8, t)
        values = basis_values(basis_ball8, z)
        derivs = basis_deriv_values(basis_ball8, t)
        rows = np.vstack([values, derivs])  # constraints as row functionals
        pivots = (0, 1)
        block = rows[:, pivots]
        for j in range(basis_ball8.size):
            if j in pivots:
                continue
            member = np.zeros(basis_ball8.size, dtype=complex)
            member[j] = 1.0
            correction = np.linalg.solve(block, -rows[:, j])
            member[list(pivots)] = correction
            assert abs(eval_in_span(basis_ball8, member, z)) < 1e-12
            assert abs(deriv_in_span(basis_ball8, member, t)) < 1e-12
            assert abs(np.vdot(maximizer, member)) < 1e-10


class TestCaratheodoryExact:
    def test_disc_center_schwarz_value(self, disc):
        result = caratheodory_exact(disc, tangent([0.0], [1.0]))
        assert result.value == pytest.approx(1.0, rel=1e-14)
        assert result.mode == MODE_EXACT
        assert result.certificate(np.array([0.5])) == pytest.approx(0.5, rel=1e-14)

    def test_bidisc_dominant_coordinate(self, bidisc):
        x = np.array([np.sqrt(0.8) * np.exp(0.9j), np.sqrt(0.2)])
        result = caratheodory_exact(bidisc, tangent(np.zeros(2), x))
        assert result.value == pytest.approx(np.sqrt(0.8), rel=1e-14)
        cert = result.certificate
        assert cert.coeffs == pytest.approx(
            {(1, 0): np.conj(x[0]) / abs(x[0])}
        )

    def test_ball_center_unit_direction(self, ball2, rng):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        x /= np.linalg.norm(x)
        result = caratheodory_exact(ball2, tangent(np.zeros(2), x))
        assert result.value == pytest.approx(1.0, rel=1e-14)
        assert result.certificate.coeffs == pytest.approx(
            {(1, 0): np.conj(x[0]), (0, 1): np.conj(x[1])}
        )
        assert result.sup_estimate <= 1.0 + 1e-12

    def test_disc_away_from_center_schwarz_pick(self, disc):
        z = np.array([0.4 + 0.2j])
        result = caratheodory_exact(disc, tangent(z, [1.0]), truncate_degree=40)
        expected = 1.0 / (1.0 - abs(z[0]) ** 2)
        assert result.value == pytest.approx(expected, rel=1e-14)
        assert abs(result.certificate(z)) < 1e-13
        assert result.sup_estimate <= 1.0 + 1e-8

    def test_scaled_disc_value(self):
        # f must map into the unit disc, so the radius-2 disc at 0 gives 1/2
        domain = polydisc((2.0,))
        result = caratheodory_exact(domain, tangent([0.0], [1.0]))
        assert result.value == pytest.approx(0.5, rel=1e-14)

    def test_scaled_disc_lu_inequality_holds(self):
        domain = polydisc((2.0,))
        basis = build_basis(domain, 12)
        t = tangent([0.0], [1.0])
        cara = caratheodory_exact(domain, t)
        gap = lu_gap(basis, t, cara)
        assert bergman_metric_hessian(basis, t) == pytest.approx(
            math.sqrt(2) / 2.0, rel=1e-12
        )
        assert gap > 0.0

    def test_ball_transport_matches_closed_form(self, ball2, rng):
        basis = build_basis(ball2, 24)
        for _ in range(5):
            z = 0.25 * (rng.standard_normal(2) + 1j * rng.standard_normal(2))
            radius = float(np.linalg.norm(z))
            if radius > 0.55:
                z *= 0.55 / radius
            x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            t = tangent(z, x)
            result = caratheodory_exact(ball2, t, truncate_degree=24)
            t_sq = float(np.vdot(z, z).real)
            pairing = complex(np.vdot(z, x))  # sum x_j conj(z_j)
            closed = math.sqrt(
                (1 - t_sq) * float(np.vdot(x, x).real) + abs(pairing) ** 2
            ) / (1 - t_sq)
            assert result.value == pytest.approx(closed, rel=1e-12)
            # B = sqrt(3) C identically on the ball; the Bergman side is
            # kernel-truncation limited away from the center
            assert bergman_metric_hessian(basis, t) == pytest.approx(
                math.sqrt(3) * result.value, rel=1e-6
            )
            assert abs(result.certificate(z)) < 1e-12

    def test_polydisc_away_from_center_vs_minimax(self, bidisc):
        z = np.array([0.3, -0.2j])
        x = np.array([1.0, 0.4])
        t = tangent(z, x)
        exact = caratheodory_exact(bidisc, t, truncate_degree=24)
        boundary = sample_boundary(bidisc, 768, seed=21)
        lower = caratheodory_minimax(bidisc, t, degree=5, boundary=boundary)
        assert exact.value == pytest.approx(
            max(1.0 * 1.0 / (1 - 0.09), 1.0 * 0.4 / (1 - 0.04)), rel=1e-14
        )
        assert lower.value == pytest.approx(exact.value, abs=2e-3)

    def test_zero_direction(self, ball2):
        result = caratheodory_exact(ball2, tangent([0.1, 0.1], [0.0, 0.0]))
        assert result.value == 0.0
        assert not result.certificate.coeffs

    def test_egg_not_supported(self, egg12):
        with pytest.raises(UnsupportedDomainError, match="minimax"):
            caratheodory_exact(egg12, tangent(np.zeros(2), [1.0, 0.0]))

    def test_outside_point_rejected(self, ball2):
        with pytest.raises(ValueError, match="inside"):
            caratheodory_exact(ball2, tangent([1.2, 0.0], [1.0, 0.0]))

    def test_homogeneity(self, ball2):
        z = np.array([0.2, 0.3j])
        x = np.array([0.5 - 0.1j, 0.8])
        base = caratheodory_exact(ball2, tangent(z, x)).value
        for lam in (3.0, 0.25j, -1.1 + 0.6j):
            scaled = caratheodory_exact(ball2, tangent(z, lam * x)).value
            assert scaled == pytest.approx(abs(lam) * base, rel=1e-10)


class TestLuGap:
    def test_disc_center(self, basis_disc40, disc):
        t = tangent([0.0], [1.0])
        gap = lu_gap(basis_disc40, t, caratheodory_exact(disc, t))
        assert gap == pytest.approx(math.sqrt(2) - 1.0, rel=1e-12)

    def test_ball_center(self, basis_ball8, ball2, rng):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        x /= np.linalg.norm(x)
        t = tangent(np.zeros(2), x)
        gap = lu_gap(basis_ball8, t, caratheodory_exact(ball2, t))
        assert gap == pytest.approx(math.sqrt(3) - 1.0, rel=1e-12)

    def test_zero_direction_gap_zero(self, basis_ball8, ball2):
        t = tangent([0.2, 0.1], [0.0, 0.0])
        assert lu_gap(basis_ball8, t, caratheodory_exact(ball2, t)) == 0.0


class TestBallAutomorphism:
    def test_swaps_center_and_parameter(self):
        a = np.array([0.3 + 0.1j, -0.2j])
        phi = BallAutomorphism(a)
        assert np.max(np.abs(phi(np.zeros(2)) - a)) < 1e-15
        assert np.max(np.abs(phi(a))) < 1e-15

    def test_involution_on_random_points(self, rng):
        a = np.array([0.25, 0.35j])
        phi = BallAutomorphism(a)
        for _ in range(10):
            w = 0.6 * (rng.standard_normal(2) + 1j * rng.standard_normal(2)) / 2
            assert np.max(np.abs(phi(phi(w)) - w)) < 1e-13

    def test_jacobian_matches_finite_differences(self, rng):
        a = np.array([0.3, -0.2 + 0.1j])
        phi = BallAutomorphism(a)
        w = np.array([0.1 + 0.2j, 0.15j])
        h = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        step = 1e-7
        fd = (phi(w + step * h) - phi(w - step * h)) / (2 * step)
        assert np.max(np.abs(phi.jacobian_apply(w, h) - fd)) < 1e-6

    def test_metric_invariance_along_parameter_family(self, ball2):
        # B and C agree at (F(0), DF(0)X) and (0, X) for automorphisms F
        basis = build_basis(ball2, 16)
        x = np.array([0.8, 0.6j])
        t0 = tangent(np.zeros(2), x)
        b0 = bergman_metric_hessian(basis, t0)
        c0 = caratheodory_exact(ball2, t0).value
        direction = np.array([0.5 + 0.5j, -0.4])
        direction /= np.linalg.norm(direction)
        for scale in (0.1, 0.2, 0.3):
            phi = BallAutomorphism(scale * direction)
            z1 = phi(np.zeros(2))
            x1 = phi.jacobian_apply(np.zeros(2), x)
            t1 = tangent(z1, x1)
            assert bergman_metric_hessian(basis, t1) == pytest.approx(b0, abs=1e-6)
            assert caratheodory_exact(ball2, t1).value == pytest.approx(c0, abs=1e-6)
