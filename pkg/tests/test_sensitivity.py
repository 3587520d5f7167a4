"""Finite-difference sensitivities and the weight identity."""

import math

import numpy as np
import pytest

from bifloquet.floquet import DriveConfig, default_truncation, solve_floquet
from bifloquet.sensitivity import (
    gap_sensitivity_amplitude,
    gap_sensitivity_bias,
    verify_weight_identity,
)


class TestBiasSensitivity:
    def test_static_sweet_spot(self):
        d = DriveConfig(b=0.0, big_omega=0.0, omega=1.0)
        r = gap_sensitivity_bias(d)
        assert r.method == "finite-difference"
        assert abs(r.value) < 1e-9

    def test_static_slope_at_unit_bias(self):
        d = DriveConfig(b=1.0, big_omega=0.0, omega=3.0)
        r = gap_sensitivity_bias(d)
        assert abs(r.value) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-6)

    def test_rejects_bad_step(self):
        with pytest.raises(ValueError):
            gap_sensitivity_bias(DriveConfig(), h=0.0)

    def test_resonant_flatter_than_fast_drive(self):
        """At fixed small bias the resonant drive has the flatter gap."""
        kw = dict(w_q=1.0, b=0.05, big_omega=0.1, n1=3, n2=1, omega=1.0)
        fast = abs(gap_sensitivity_bias(DriveConfig(nu=0.0, **kw)).value)
        resonant = abs(gap_sensitivity_bias(
            DriveConfig(nu=math.pi / 2, **kw)).value)
        assert resonant < fast


class TestAmplitudeSensitivity:
    def test_one_sided_at_zero_amplitude(self):
        # off-resonant base frequency: the undriven point is a gap extremum
        d = DriveConfig(b=0.0, big_omega=0.0, nu=0.3, n1=3, n2=1, omega=2.0)
        r = gap_sensitivity_amplitude(d)
        assert r.one_sided
        assert abs(r.value) < 1e-6  # gap is even in the amplitude at b = 0

    def test_central_by_default(self):
        d = DriveConfig(b=0.1, big_omega=0.2, nu=0.4, n1=3, n2=1, omega=1.0)
        r = gap_sensitivity_amplitude(d)
        assert not r.one_sided
        assert math.isfinite(r.value)

    def test_resonant_more_ac_sensitive_than_fast(self):
        kw = dict(w_q=1.0, b=0.05, big_omega=0.1, n1=3, n2=1, omega=1.0)
        fast = abs(gap_sensitivity_amplitude(DriveConfig(nu=0.0, **kw)).value)
        resonant = abs(gap_sensitivity_amplitude(
            DriveConfig(nu=math.pi / 2, **kw)).value)
        assert resonant > fast

    def test_step_consistency(self):
        d = DriveConfig(b=0.1, big_omega=0.3, nu=0.5, n1=3, n2=1, omega=1.2)
        a = gap_sensitivity_amplitude(d, h=1e-5).value
        b = gap_sensitivity_amplitude(d, h=3e-5).value
        assert a == pytest.approx(b, abs=1e-5)


class TestWeightIdentity:
    def test_undriven(self):
        d = DriveConfig(b=1.0, big_omega=0.0, omega=3.0)
        rep = verify_weight_identity(d, tol=1e-6)
        assert rep.ok
        assert abs(rep.fd_value) == pytest.approx(1 / math.sqrt(2), abs=1e-6)
        assert rep.weight_value == pytest.approx(rep.fd_value, abs=1e-6)

    def test_driven_grid(self):
        for b in (-0.5, 0.1, 0.8):
            for nu in (0.1, 0.8, 1.4):
                d = DriveConfig(b=b, big_omega=0.1, nu=nu, n1=3, n2=1,
                                omega=1.0)
                rep = verify_weight_identity(d, tol=1e-4)
                assert rep.ok, (b, nu, rep.residual)

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError):
            verify_weight_identity(DriveConfig(), tol=0.0)


class TestWarmStartConsistency:
    def test_center_reuse_matches_cold(self):
        d = DriveConfig(b=0.2, big_omega=0.15, nu=0.7, n1=3, n2=1, omega=1.1)
        trunc = default_truncation(d)
        center = solve_floquet(d, trunc)
        v1 = gap_sensitivity_bias(d, trunc, center=center).value
        v2 = gap_sensitivity_bias(d, trunc).value
        assert v1 == pytest.approx(v2, abs=1e-12)
