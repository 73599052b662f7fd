import math
from fractions import Fraction

import numpy as np
import pytest

from ctl.core.graph import odd_girth
from ctl.core.rng import check_seed, make_rng
from ctl.services.sphere import (
    SCALE,
    antipode,
    borsuk_graph,
    borsuk_sample,
    cap_fraction,
    check_angle,
    cos_units,
    delta_for_cap,
    point,
    sample_points,
    sin_units,
)


class TestAngles:
    def test_cosine_of_a_third_pi(self):
        assert cos_units(Fraction(1, 3)) == SCALE * SCALE // 2

    def test_cosine_of_a_quarter_pi_to_full_scale(self):
        # sqrt(2)/2 = 0.707106781186547524400844362104...
        assert cos_units(Fraction(1, 4)) == 707106781186547524400844

    def test_cosine_matches_float(self):
        for angle in (Fraction(1, 10), Fraction(1, 7), Fraction(2, 9)):
            assert cos_units(angle) / SCALE**2 == pytest.approx(math.cos(float(angle) * math.pi), abs=1e-15)

    def test_sine_is_shifted_cosine(self):
        assert sin_units(Fraction(1, 6)) == cos_units(Fraction(1, 3))

    def test_monotone(self):
        assert cos_units(Fraction(1, 10)) > cos_units(Fraction(1, 5)) > 0

    @pytest.mark.parametrize("angle", [Fraction(0), Fraction(1, 2), Fraction(3, 4), Fraction(-1, 10)])
    def test_angle_range(self, angle):
        with pytest.raises(ValueError):
            check_angle(angle, "eps")


class TestPoints:
    def test_point_is_normalized(self):
        p = point([3, 4])
        assert p.units == (600000000000, 800000000000)
        assert p.dimension == 1

    def test_antipode(self):
        p = point([1, 2, 2])
        assert p.dot_units(antipode(p)) == -p.dot_units(p)

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            point([0, 0, 0])

    def test_sampling_is_seeded(self):
        a = sample_points(2, 8, make_rng(5, 0))
        b = sample_points(2, 8, make_rng(5, 0))
        c = sample_points(2, 8, make_rng(5, 1))
        assert a == b
        assert a != c
        for p in a:
            assert abs(p.dot_units(p) - SCALE * SCALE) < 10 * SCALE

    def test_streams_are_independent_of_global_state(self):
        np.random.seed(0)
        first = make_rng(9, 2, 3).random()
        np.random.seed(1)
        assert make_rng(9, 2, 3).random() == first

    def test_seed_range(self):
        with pytest.raises(ValueError):
            check_seed(-1)
        with pytest.raises(ValueError):
            check_seed(1 << 64)
        with pytest.raises(ValueError):
            check_seed(True)


class TestBorsuk:
    """Borsuk graphs join almost antipodal points."""

    def test_antipodal_pair(self):
        p = point([1, 0, 0])
        q = point([0, 1, 0])
        g = borsuk_graph([p, antipode(p), q], Fraction(1, 10))
        assert list(g.edges()) == [(0, 1)]
        assert g.labels == ("U0", "U1", "U2")

    def test_sample_is_deterministic(self):
        g1, points1 = borsuk_sample(2, Fraction(1, 8), 60, seed=42)
        g2, points2 = borsuk_sample(2, Fraction(1, 8), 60, seed=42)
        assert g1 == g2
        assert points1 == points2

    def test_edges_follow_the_angle_rule(self):
        eps = Fraction(1, 6)
        g, points = borsuk_sample(2, eps, 40, seed=3)
        bound = -cos_units(eps)
        for i in range(40):
            for j in range(i + 1, 40):
                assert g.has_edge(i, j) == (points[i].dot_units(points[j]) <= bound)

    def test_small_eps_gives_long_odd_cycles(self):
        g, _ = borsuk_sample(1, Fraction(1, 10), 80, seed=1)
        assert odd_girth(g) == math.inf or odd_girth(g) >= 9

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            borsuk_sample(2, Fraction(1, 10), 1, seed=0)


class TestCaps:
    def test_hemisphere(self):
        assert cap_fraction(2, math.pi / 2) == pytest.approx(0.5, abs=1e-3)
        assert cap_fraction(1, math.pi / 2) == pytest.approx(0.5, abs=1e-3)

    def test_two_sphere_closed_form(self):
        # On S^2 a cap of polar angle t covers (1 - cos t) / 2
        assert cap_fraction(2, 1.0) == pytest.approx((1 - math.cos(1.0)) / 2, abs=1e-3)

    def test_delta_for_cap(self):
        delta = delta_for_cap(2, 0.4)
        expected = (math.pi / 2 - math.acos(0.2)) / math.pi
        assert float(delta) == pytest.approx(expected, abs=1e-3)
        assert cap_fraction(2, (0.5 - float(delta)) * math.pi) >= 0.4

    def test_delta_for_cap_range(self):
        with pytest.raises(ValueError):
            delta_for_cap(2, 0.5)
