"""Tests for the analytic test fields and the finite-difference oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import retlab as rl
from retlab.fields import BUMP_RADIUS, bump_profile


class TestBumpProfile:
    """Radial cos^4 profile and its C2 boundary."""

    def test_center_value(self):
        assert bump_profile(0.0) == 1.0

    def test_boundary_value(self):
        assert bump_profile(math.pi / 2) == pytest.approx(0.0, abs=1e-30)

    def test_quarter_turn(self):
        # cos^4(pi/4) = (1/sqrt(2))^4 = 1/4
        assert bump_profile(math.pi / 4) == pytest.approx(0.25, rel=1e-14)

    def test_beyond_support_exactly_zero(self):
        assert bump_profile(2.0) == 0.0
        assert np.all(bump_profile(np.linspace(1.6, 50.0, 100)) == 0.0)

    def test_c2_boundary_continuity(self):
        """First and second partials vanish on both sides of the edge."""
        spec = rl.static_bump()
        for r in (BUMP_RADIUS - 1e-9, BUMP_RADIUS + 1e-9):
            b = rl.field_partials(spec, rl.SpaceTimePoint(x=r))
            assert b.max_abs() <= 1e-12


class TestTranslatedBump:
    """Moving bump: value, support and chain-rule time partials."""

    def test_center_at_origin(self):
        spec = rl.translated_bump(v=0.5)
        assert rl.field_value(spec, rl.SpaceTimePoint()) == 1.0

    def test_center_moves_with_velocity(self):
        spec = rl.translated_bump(v=0.5)
        for t in (-2.0, 0.7, 3.0):
            p = rl.SpaceTimePoint(z=0.5 * t, t=t)
            assert rl.field_value(spec, p) == 1.0

    def test_outside_support_zero(self):
        spec = rl.translated_bump(v=0.5)
        t = 0.8
        p = rl.SpaceTimePoint(x=1.2, y=1.0, z=0.5 * t + 0.5, t=t)
        assert rl.field_value(spec, p) == 0.0
        assert rl.field_partials(spec, p).max_abs() == 0.0

    def test_second_partials_at_origin(self):
        # cos^4(r) = 1 - 2 r^2 + O(r^4), so every diagonal second partial
        # is -4 at the center; cross-checked against the oracle below.
        spec = rl.translated_bump(v=0.5)
        b = rl.field_partials(spec, rl.SpaceTimePoint())
        assert b.f_xx == pytest.approx(-4.0, rel=1e-12)
        assert b.f_yy == pytest.approx(-4.0, rel=1e-12)
        assert b.f_zz == pytest.approx(-4.0, rel=1e-12)
        fd = rl.fd_partials(spec, rl.SpaceTimePoint(), h=1e-4)
        assert fd.f_xx == pytest.approx(-4.0, abs=1e-6)

    def test_time_partials_follow_chain_rule(self):
        """f_t = -v f_z and f_tt = v^2 f_zz hold exactly everywhere."""
        spec = rl.translated_bump(v=0.37)
        rng = np.random.default_rng(11)
        for _ in range(30):
            p = rl.SpaceTimePoint(*rng.uniform(-1.5, 1.5, 3),
                                  rng.uniform(-1.0, 1.0))
            b = rl.field_partials(spec, p)
            assert b.f_t == pytest.approx(-spec.v * b.f_z, abs=1e-15)
            assert b.f_tt == pytest.approx(spec.v ** 2 * b.f_zz, abs=1e-15)

    def test_speed_limit_enforced(self):
        with pytest.raises(ValueError):
            rl.translated_bump(v=1.0, c=1.0)
        with pytest.raises(ValueError):
            rl.translated_bump(v=-2.0, c=1.0)

    @given(radius=st.floats(min_value=1.58, max_value=40.0),
           t=st.floats(min_value=-3.0, max_value=3.0),
           mu=st.floats(min_value=-1.0, max_value=1.0),
           phi=st.floats(min_value=0.0, max_value=2 * math.pi))
    @settings(max_examples=60, deadline=None)
    def test_compact_support_property(self, radius, t, mu, phi):
        """Any point beyond the bump-frame radius gives an all-zero bundle."""
        spec = rl.translated_bump(v=0.5)
        s = math.sqrt(1.0 - mu * mu)
        p = rl.SpaceTimePoint(radius * s * math.cos(phi),
                              radius * s * math.sin(phi),
                              radius * mu + spec.v * t, t)
        assert rl.field_value(spec, p) == 0.0
        assert rl.field_partials(spec, p).max_abs() == 0.0


class TestStaticBump:

    def test_centered_value(self):
        spec = rl.static_bump(center=(1.0, -2.0, 0.5))
        assert rl.field_value(spec, rl.SpaceTimePoint(1.0, -2.0, 0.5)) == 1.0

    def test_time_independent(self):
        spec = rl.static_bump(center=(0.3, 0.0, 0.0))
        p1 = rl.SpaceTimePoint(0.5, 0.2, -0.1, t=0.0)
        p2 = rl.SpaceTimePoint(0.5, 0.2, -0.1, t=17.0)
        assert rl.field_value(spec, p1) == rl.field_value(spec, p2)
        b = rl.field_partials(spec, p1)
        assert b.f_t == 0.0
        assert b.f_tt == 0.0


class TestShellWave:
    """Regular spherical wave: homogeneous solution plus smooth switch."""

    def test_always_on_solves_wave_equation(self):
        spec = rl.shell_wave(radius=6.0, width=1.0, c=1.0)
        rng = np.random.default_rng(3)
        worst = 0.0
        for _ in range(50):
            direction = rng.normal(size=3)
            direction /= np.linalg.norm(direction)
            rho = rng.uniform(4.5, 7.5)
            p = rl.SpaceTimePoint(*(rho * direction), rng.uniform(-0.5, 0.5))
            b = rl.field_partials(spec, p)
            worst = max(worst, abs(b.laplacian() - b.f_tt / spec.c ** 2))
        assert worst <= 1e-8

    def test_small_radius_limit_is_continuous(self):
        spec = rl.shell_wave()
        t = 6.0 - 1.0 / math.sqrt(7.0)  # shell sweeping through the origin
        v0 = rl.field_value(spec, rl.SpaceTimePoint(t=t))
        for rho in (1e-7, 1e-8, 3e-7):
            v = rl.field_value(spec, rl.SpaceTimePoint(x=rho, t=t))
            assert v == pytest.approx(v0, rel=1e-10)

    def test_switched_shell_zero_before_switch(self):
        spec = rl.shell_wave(switch_window=(0.0, 1.0))
        p = rl.SpaceTimePoint(2.0, 0.0, 0.0, t=-1.0)
        assert rl.field_value(spec, p) == 0.0
        assert rl.field_partials(spec, p).max_abs() == 0.0

    def test_switch_reaches_full_amplitude(self):
        switched = rl.shell_wave(switch_window=(0.0, 1.0))
        always = rl.shell_wave()
        p = rl.SpaceTimePoint(0.3, 0.0, 0.0, t=5.6)
        assert rl.field_value(switched, p) == rl.field_value(always, p)

    def test_validation(self):
        with pytest.raises(ValueError):
            rl.shell_wave(width=0.0)
        with pytest.raises(ValueError):
            rl.shell_wave(switch_window=(1.0, 1.0))
        with pytest.raises(ValueError):
            rl.FieldSpec(family="shell_wave", c=0.0)


class TestFiniteDifferenceOracle:
    """Central differences validate the closed-form partials."""

    def _random_in_support(self, rng, spec):
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        radius = rng.uniform(0.0, 1.45)
        t = rng.uniform(-0.4, 0.4)
        pos = radius * direction + np.array([0.0, 0.0, spec.v * t])
        return rl.SpaceTimePoint(*pos, t)

    def test_oracle_agreement(self):
        """100 random in-support points: max relative discrepancy at
        h = 1e-4 stays within 1e-6 of the bundle scale."""
        spec = rl.translated_bump(v=0.5)
        rng = np.random.default_rng(42)
        worst = 0.0
        for _ in range(100):
            p = self._random_in_support(rng, spec)
            exact = rl.field_partials(spec, p)
            approx = rl.fd_partials(spec, p, h=1e-4)
            scale = exact.max_abs()
            if scale == 0.0:
                continue
            disc = np.max(np.abs(exact.as_array() - approx.as_array())) / scale
            worst = max(worst, disc)
        assert worst <= 1e-6

    def test_second_order_convergence(self):
        """Halving h cuts the discrepancy by about 4x."""
        spec = rl.translated_bump(v=0.5)
        p = rl.SpaceTimePoint(0.4, -0.3, 0.6, 0.2)
        exact = rl.field_partials(spec, p).as_array()

        def disc(h):
            return np.max(np.abs(exact - rl.fd_partials(spec, p, h=h).as_array()))

        ratio = disc(2e-4) / disc(1e-4)
        assert 3.0 <= ratio <= 5.0

    def test_zero_region_all_zero(self):
        spec = rl.translated_bump(v=0.5)
        p = rl.SpaceTimePoint(5.0, 5.0, 5.0, 0.0)
        assert rl.fd_partials(spec, p, h=1e-3).max_abs() == 0.0

    def test_rejects_bad_step(self):
        spec = rl.translated_bump()
        with pytest.raises(ValueError):
            rl.fd_partials(spec, rl.SpaceTimePoint(), h=0.0)
