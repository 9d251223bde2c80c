import math

import numpy as np
import pytest
from scipy.integrate import quad

from sidesense import (BearingEstimate, FusionSingularError, closest_point_on_line,
                       expected_closest_point, fuse_bearings, fusion_objective,
                       fusion_system, oracle_fuse, quadrature_objective, sector_coeffs)
from sidesense.localization import solve_2x2
from sidesense.validate import fd_gradient, random_bearings

A5 = math.radians(5.0)


def rand_pairs(rng, n):
    return rng.uniform(0, 2 * math.pi, n), rng.uniform(1e-3, math.pi / 4, n)


class TestSectorCoeffs:
    def test_theta_zero(self):
        c = sector_coeffs(0.0, A5)
        assert c.a1 == 0.0
        assert c.a0 == pytest.approx(A5 + 0.5 * math.sin(2 * A5), rel=1e-15)
        assert c.a2 == pytest.approx(A5 - 0.5 * math.sin(2 * A5), rel=1e-15)

    def test_theta_quarter_pi_symmetry(self):
        for alpha in (0.01, 0.1, math.pi / 4):
            c = sector_coeffs(math.pi / 4, alpha)
            assert c.a0 == pytest.approx(alpha, abs=1e-15)
            assert c.a2 == pytest.approx(alpha, abs=1e-15)
            assert c.a1 == pytest.approx(0.5 * math.sin(2 * alpha), rel=1e-15)

    def test_trace_and_determinant_invariants(self):
        rng = np.random.default_rng(60)
        for th, al in zip(*rand_pairs(rng, 300)):
            c = sector_coeffs(th, al)
            assert c.a0 + c.a2 == pytest.approx(2 * al, rel=1e-12)
            det = c.a0 * c.a2 - c.a1 ** 2
            assert det == pytest.approx(al ** 2 - 0.25 * math.sin(2 * al) ** 2, abs=1e-15)
            assert det > 0

    def test_alpha_range_enforced(self):
        for bad in (0.0, -0.1, math.pi / 4 + 1e-6):
            with pytest.raises(ValueError):
                sector_coeffs(1.0, bad)

    def test_matches_quadrature_of_raw_integrands(self):
        # adaptive quadrature of the tangent-form integrands is the oracle
        rng = np.random.default_rng(61)
        for th, al in zip(*rand_pairs(rng, 50)):
            c = sector_coeffs(th, al)
            q0 = quad(lambda e: 1 / (1 + math.tan(th + e) ** 2), -al, al, limit=200)[0]
            q1 = quad(lambda e: math.tan(th + e) / (1 + math.tan(th + e) ** 2),
                      -al, al, limit=200)[0]
            q2 = quad(lambda e: math.tan(th + e) ** 2 / (1 + math.tan(th + e) ** 2),
                      -al, al, limit=200)[0]
            assert abs(q0 - c.a0) < 1e-9
            assert abs(q1 - c.a1) < 1e-9
            assert abs(q2 - c.a2) < 1e-9


class TestClosestPoint:
    def test_projection_onto_x_axis(self):
        assert np.allclose(closest_point_on_line((0, 0), 0.0, (3, 4)), [3, 0])

    def test_point_on_line_is_fixed(self):
        p = closest_point_on_line((1, 1), math.pi / 4, (3, 3))
        assert np.allclose(p, [3, 3], atol=1e-12)

    def test_near_vertical_limit_form(self):
        p = closest_point_on_line((2, 0), math.pi / 2, (7, 5))
        assert np.allclose(p, [2, 5])

    def test_matches_vector_projection_oracle(self):
        rng = np.random.default_rng(62)
        for _ in range(2000):
            anchor = rng.uniform(-100, 100, 2)
            target = rng.uniform(-100, 100, 2)
            ang = rng.uniform(0, 2 * math.pi)
            if abs(math.cos(ang)) < 1e-9:
                continue
            u = np.array([math.cos(ang), math.sin(ang)])
            want = anchor + np.dot(target - anchor, u) * u
            got = closest_point_on_line(anchor, ang, target)
            assert np.max(np.abs(got - want)) < 1e-12


class TestExpectedClosestPoint:
    def test_anchor_is_fixed_point(self):
        rng = np.random.default_rng(63)
        for th, al in zip(*rand_pairs(rng, 50)):
            br = BearingEstimate(3.0, -2.0, th, al)
            assert np.allclose(expected_closest_point((3.0, -2.0), br), [3.0, -2.0],
                               atol=1e-12)

    def test_theta_zero_unit_target(self):
        br = BearingEstimate(0.0, 0.0, 0.0, A5)
        c = sector_coeffs(0.0, A5)
        got = expected_closest_point((0.0, 1.0), br)
        assert got[0] == pytest.approx(c.a1 / (2 * A5), abs=1e-15)  # = 0
        assert got[1] == pytest.approx(c.a2 / (2 * A5), rel=1e-12)

    def test_monte_carlo_expectation_oracle(self):
        rng = np.random.default_rng(64)
        n_draws = 200_000
        for _ in range(10):
            anchor = rng.uniform(-50, 50, 2)
            target = rng.uniform(-50, 50, 2)
            theta = rng.uniform(0, 2 * math.pi)
            alpha = rng.uniform(0.01, math.pi / 4)
            br = BearingEstimate(anchor[0], anchor[1], theta, alpha)
            eps = rng.uniform(-alpha, alpha, n_draws)
            # vectorized exact projections over the eps draws
            a = np.tan(theta + eps)
            den = 1 + a * a
            xs = (target[0] + a * target[1] - a * anchor[1] + a * a * anchor[0]) / den
            ys = (a * target[0] + a * a * target[1] + anchor[1] - a * anchor[0]) / den
            want = expected_closest_point(target, br)
            for sample, w in ((xs, want[0]), (ys, want[1])):
                se = sample.std(ddof=1) / math.sqrt(n_draws)
                assert abs(sample.mean() - w) < 3 * se

    def test_converges_to_projection_as_alpha_shrinks(self):
        # E[closest point] - projection = O(alpha^2)
        br_big = BearingEstimate(1.0, 2.0, 0.7, 0.08)
        br_small = BearingEstimate(1.0, 2.0, 0.7, 0.04)
        target = (8.0, -3.0)
        proj = closest_point_on_line((1.0, 2.0), 0.7, target)
        d_big = np.linalg.norm(expected_closest_point(target, br_big) - proj)
        d_small = np.linalg.norm(expected_closest_point(target, br_small) - proj)
        assert d_small == pytest.approx(d_big / 4.0, rel=0.05)


class TestFusion:
    def test_single_bearing_returns_anchor(self):
        got = fuse_bearings([BearingEstimate(2.0, 3.0, 0.0, A5)])
        assert got[0] == 2.0 and got[1] == 3.0

    def test_single_bearing_roundoff_bound(self):
        rng = np.random.default_rng(65)
        for _ in range(200):
            br = BearingEstimate(float(rng.uniform(-50, 50)), float(rng.uniform(-50, 50)),
                                 float(rng.uniform(0, 2 * math.pi)),
                                 float(rng.uniform(0.01, math.pi / 4)))
            got = fuse_bearings([br])
            assert abs(got[0] - br.x) < 1e-9 and abs(got[1] - br.y) < 1e-9

    def test_two_opposing_sensors_meet_in_middle(self):
        bearings = [BearingEstimate(-7.0, 0.0, 0.0, A5),
                    BearingEstimate(7.0, 0.0, math.pi, A5)]
        assert np.allclose(fuse_bearings(bearings), [0.0, 0.0], atol=1e-12)

    def test_perpendicular_fixture_hand_assembled(self):
        # sensors at (0,0) looking along +x and (5,5) looking along -y
        bearings = [BearingEstimate(0.0, 0.0, 0.0, A5),
                    BearingEstimate(5.0, 5.0, -math.pi / 2, A5)]
        got = fuse_bearings(bearings)
        mu1 = A5 + 0.5 * math.sin(2 * A5)
        mu2 = A5 - 0.5 * math.sin(2 * A5)
        want = np.array([5 * mu1, 5 * mu2]) / (2 * A5)
        assert np.allclose(got, want, atol=1e-12)
        assert got[0] == pytest.approx(4.9873, abs=5e-5)
        assert got[1] == pytest.approx(0.0127, abs=5e-5)

    def test_matrix_is_symmetric_positive_definite(self):
        rng = np.random.default_rng(66)
        for _ in range(100):
            bearings = random_bearings(rng, int(rng.integers(1, 15)))
            m, _ = fusion_system(bearings)
            assert m[0, 1] == m[1, 0]
            eigs = np.linalg.eigvalsh(m)
            assert np.all(eigs > 0)

    def test_singular_system_reported(self):
        with pytest.raises(FusionSingularError):
            solve_2x2(np.array([[1.0, 1.0], [1.0, 1.0]]), np.array([1.0, 1.0]))

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            fuse_bearings([])

    def test_translation_equivariance(self):
        rng = np.random.default_rng(67)
        bearings = random_bearings(rng, 6)
        base = fuse_bearings(bearings)
        shift = np.array([13.0, -4.5])
        moved = [BearingEstimate(b.x + shift[0], b.y + shift[1], b.theta, b.alpha)
                 for b in bearings]
        assert np.allclose(fuse_bearings(moved), base + shift, atol=1e-9)

    def test_rotation_equivariance(self):
        rng = np.random.default_rng(68)
        bearings = random_bearings(rng, 6)
        base = fuse_bearings(bearings)
        phi = 0.83
        rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
        turned = [BearingEstimate(*(rot @ [b.x, b.y]), b.theta + phi, b.alpha)
                  for b in bearings]
        assert np.allclose(fuse_bearings(turned), rot @ base, atol=1e-9)

    def test_heterogeneous_alphas_supported(self):
        bearings = [BearingEstimate(0.0, 0.0, 0.0, 0.02),
                    BearingEstimate(5.0, 5.0, -math.pi / 2, 0.3),
                    BearingEstimate(-4.0, 2.0, 0.5, math.pi / 4)]
        got = fuse_bearings(bearings)
        searched = oracle_fuse(bearings)
        assert np.max(np.abs(got - searched)) < 1e-3


class TestFusionOracle:
    def test_solve_matches_search(self):
        rng = np.random.default_rng(69)
        for _ in range(25):
            bearings = random_bearings(rng, int(rng.integers(1, 21)))
            solved = fuse_bearings(bearings)
            searched = oracle_fuse(bearings)
            assert np.max(np.abs(solved - searched)) < 1e-3

    def test_single_bearing_search(self):
        br = BearingEstimate(4.0, -1.0, 1.1, 0.1)
        assert np.max(np.abs(oracle_fuse([br]) - [4.0, -1.0])) < 1e-3

    def test_gradient_vanishes_at_solution(self):
        rng = np.random.default_rng(70)
        for _ in range(20):
            bearings = random_bearings(rng, int(rng.integers(2, 15)))
            p = fuse_bearings(bearings)
            scale = max(1.0, quadrature_objective(p, bearings))
            assert fd_gradient(p, bearings) / scale < 1e-6

    def test_quadrature_matches_closed_form_objective(self):
        rng = np.random.default_rng(71)
        bearings = random_bearings(rng, 8)
        for _ in range(20):
            p = rng.uniform(-60, 60, 2)
            assert quadrature_objective(p, bearings) == pytest.approx(
                fusion_objective(p, bearings), rel=1e-12)

    def test_objective_larger_away_from_solution(self):
        rng = np.random.default_rng(72)
        bearings = random_bearings(rng, 10)
        p = fuse_bearings(bearings)
        f0 = fusion_objective(p, bearings)
        for _ in range(20):
            q = p + rng.normal(0, 5, 2)
            assert fusion_objective(q, bearings) >= f0
