"""Tests for retarded-time geometry, kernels and the wave operator."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import retlab as rl

finite = st.floats(min_value=-50.0, max_value=50.0,
                   allow_nan=False, allow_infinity=False)


class TestRetardedTime:

    def test_zero_separation(self):
        cfg = rl.KernelConfig()
        assert rl.retarded_time((1, 2, 3), (1, 2, 3), 5.0, cfg) == 5.0

    def test_unit_separation_retarded(self):
        cfg = rl.KernelConfig(c=1.0)
        assert rl.retarded_time((0, 0, 0), (0, 0, 1), 0.0, cfg) == -1.0

    def test_unit_separation_advanced(self):
        cfg = rl.KernelConfig(c=1.0, propagator=rl.ADVANCED)
        assert rl.retarded_time((0, 0, 0), (0, 0, 1), 0.0, cfg) == 1.0

    @given(rx=finite, ry=finite, rz=finite, sx=finite, sy=finite, sz=finite,
           dx=finite, dy=finite, dz=finite)
    @settings(max_examples=50, deadline=None)
    def test_translation_covariance(self, rx, ry, rz, sx, sy, sz, dx, dy, dz):
        """Shifting observation and source together leaves t' unchanged."""
        cfg = rl.KernelConfig(c=2.0)
        base = rl.retarded_time((rx, ry, rz), (sx, sy, sz), 1.0, cfg)
        moved = rl.retarded_time((rx + dx, ry + dy, rz + dz),
                                 (sx + dx, sy + dy, sz + dz), 1.0, cfg)
        assert moved == pytest.approx(base, abs=1e-9)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            rl.KernelConfig(c=0.0)
        with pytest.raises(ValueError):
            rl.KernelConfig(epsilon=-1.0)
        with pytest.raises(ValueError):
            rl.KernelConfig(propagator="sideways")


class TestRegularizedKernel:

    def test_pure_regularization(self):
        assert rl.regularized_kernel(0.0, 0.1) == pytest.approx(10.0)

    def test_three_four_five(self):
        assert rl.regularized_kernel(3.0, 4.0) == pytest.approx(0.2)

    def test_bare_kernel(self):
        assert rl.regularized_kernel(1.0, 0.0) == 1.0

    def test_singularity_raises(self):
        with pytest.raises(rl.SingularKernelError):
            rl.regularized_kernel(0.0, 0.0)

    @given(d=st.floats(min_value=0.01, max_value=100.0),
           step=st.floats(min_value=0.01, max_value=10.0),
           eps=st.floats(min_value=0.0, max_value=10.0))
    @settings(max_examples=50, deadline=None)
    def test_monotone_decreasing(self, d, step, eps):
        assert rl.regularized_kernel(d + step, eps) < rl.regularized_kernel(d, eps)
        assert (rl.regularized_kernel(d, eps + step)
                < rl.regularized_kernel(d, eps))


class TestDalembertian:

    def test_moving_bump_at_origin(self):
        # Taylor partials give -4 per axis and f_tt = v^2 f_zz, so the wave
        # operator is -12 + v^2/c^2 * 4 = -11 at v = c/2.
        spec = rl.translated_bump(v=0.5)
        cfg = rl.KernelConfig()
        val = rl.dalembertian(spec, rl.SpaceTimePoint(), cfg)
        assert val == pytest.approx(-11.0, rel=1e-12)
        fd = rl.fd_partials(spec, rl.SpaceTimePoint(), h=1e-4)
        fd_val = fd.f_xx + fd.f_yy + fd.f_zz - fd.f_tt / cfg.c ** 2
        assert fd_val == pytest.approx(-11.0, abs=1e-5)

    def test_outside_support(self):
        spec = rl.translated_bump(v=0.5)
        cfg = rl.KernelConfig()
        assert rl.dalembertian(spec, rl.SpaceTimePoint(3.0, 0, 0, 0), cfg) == 0.0

    def test_homogeneous_shell(self):
        spec = rl.shell_wave()
        cfg = rl.KernelConfig()
        p = rl.SpaceTimePoint(3.4, 2.9, -3.1, 0.2)
        assert abs(rl.dalembertian(spec, p, cfg)) <= 1e-8

    def test_linearity(self):
        """box(a f + b g) = a box f + b box g pointwise."""
        spec_a = rl.translated_bump(v=0.5)
        spec_b = rl.static_bump(center=(0.4, 0.0, -0.2))
        cfg = rl.KernelConfig()
        rng = np.random.default_rng(5)
        for _ in range(10):
            a, b = rng.uniform(-3, 3, 2)
            p = rl.SpaceTimePoint(*rng.uniform(-1, 1, 3), rng.uniform(-1, 1))
            ba = rl.field_partials(spec_a, p)
            bb = rl.field_partials(spec_b, p)
            combo = a * ba.as_array() + b * bb.as_array()
            box_combo = combo[5] + combo[6] + combo[7] - combo[8] / cfg.c ** 2
            expect = (a * rl.dalembertian(spec_a, p, cfg)
                      + b * rl.dalembertian(spec_b, p, cfg))
            assert box_combo == pytest.approx(expect, abs=1e-12)


class TestEpsilonBall:
    """Contribution of the small ball around the observation point."""

    def test_ratio_approaches_one_monotonically(self):
        spec = rl.translated_bump(v=0.5)
        cfg = rl.KernelConfig()
        p = rl.SpaceTimePoint()
        f0 = rl.field_value(spec, p)
        ratios = [rl.epsilon_ball_estimate(spec, p, eps, cfg)
                  / (2.0 * math.pi * eps ** 2 * f0)
                  for eps in (0.2, 0.1, 0.05)]
        for r in ratios:
            assert 0.9 <= r <= 1.1
        assert abs(ratios[1] - 1.0) < abs(ratios[0] - 1.0)
        assert abs(ratios[2] - 1.0) < abs(ratios[1] - 1.0)

    def test_quadratic_epsilon_scaling(self):
        """Halving eps divides the estimate by about 4."""
        spec = rl.translated_bump(v=0.5)
        cfg = rl.KernelConfig()
        p = rl.SpaceTimePoint()
        big = rl.epsilon_ball_estimate(spec, p, 0.1, cfg)
        small = rl.epsilon_ball_estimate(spec, p, 0.05, cfg)
        assert 3.7 <= big / small <= 4.3

    def test_order_at_least_two(self):
        """estimate / eps^2 tends to 2 pi f with measured order >= 2."""
        spec = rl.translated_bump(v=0.5)
        cfg = rl.KernelConfig()
        p = rl.SpaceTimePoint()
        limit = 2.0 * math.pi * rl.field_value(spec, p)
        devs = [abs(rl.epsilon_ball_estimate(spec, p, eps, cfg) / eps ** 2
                    - limit)
                for eps in (0.2, 0.1, 0.05)]
        orders = [math.log2(devs[i] / devs[i + 1]) for i in range(2)]
        assert min(orders) >= 2.0

    def test_zero_neighborhood(self):
        spec = rl.translated_bump(v=0.5)
        cfg = rl.KernelConfig()
        p = rl.SpaceTimePoint(4.0, 0.0, 0.0, 0.0)
        assert rl.epsilon_ball_estimate(spec, p, 0.1, cfg) == 0.0


class TestBoundaryTerm:
    """Surface-term decay diagnostic."""

    def test_zero_beyond_compact_support(self):
        spec = rl.translated_bump(v=0.5)
        cfg = rl.KernelConfig()
        p = rl.SpaceTimePoint()
        bound = rl.support_radius(spec, p, cfg)
        assert rl.boundary_term_estimate(spec, p, bound + 0.1, cfg) == 0.0

    def test_zero_field(self):
        # Switched shell before the switch begins: the field vanishes
        # everywhere on the sphere at the relevant retarded times.
        spec = rl.shell_wave(switch_window=(0.0, 1.0))
        cfg = rl.KernelConfig()
        p = rl.SpaceTimePoint(t=-2.0)
        assert rl.boundary_term_estimate(spec, p, 30.0, cfg) == 0.0

    def test_always_on_shell_plateaus(self):
        """The 1/distance shell keeps a nonzero surface term at all radii."""
        spec, p = rl.counterexample_spec("sourceless_shell")
        cfg = rl.KernelConfig()
        values = [rl.boundary_term_estimate(spec, p, radius, cfg)
                  for radius in (20.0, 40.0, 80.0, 160.0)]
        assert all(abs(v) > 1.0 for v in values)
        spread = max(values) - min(values)
        assert spread <= 0.05 * abs(values[-1])
