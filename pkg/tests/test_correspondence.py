import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modelfree.correspondence import (build_gain_map, map_ip_to_pi,
                                      map_ipd_to_pid, map_ipi_to_pi2,
                                      map_ipid_to_pi2d, sampled_ip,
                                      sampled_ipd, sampled_ipi, sampled_ipid,
                                      sampled_pi, sampled_pi2, sampled_pi2d,
                                      sampled_pid)
from modelfree.errors import ConfigError


class TestGainMaps:
    def test_ip_to_pi_values(self):
        kp, ki = map_ip_to_pi(alpha=1.0, h=0.01, kp=1.8177)
        assert kp == pytest.approx(-100.0)
        assert ki == pytest.approx(181.77)

    def test_zero_source_gain(self):
        _, ki = map_ip_to_pi(alpha=1.0, h=0.01, kp=0.0)
        assert ki == 0.0

    def test_ip_to_pi_other_values(self):
        kp, ki = map_ip_to_pi(alpha=2.0, h=0.1, kp=16.0)
        assert kp == pytest.approx(-5.0)
        assert ki == pytest.approx(80.0)

    def test_ipd_map_structure(self):
        kp, ki, kd = map_ipd_to_pid(alpha=1.0, h=0.01, kp=0.0, kd=0.0)
        assert kp == 0.0 and ki == 0.0
        assert kd == pytest.approx(-100.0)

    def test_ipid_map_with_spring_gains(self):
        kp, ki, kii, kd = map_ipid_to_pi2d(alpha=1.0, h=0.01, kp=1.375,
                                           ki=1.6875, kd=2.25)
        assert kp == pytest.approx(225.0)
        assert ki == pytest.approx(137.5)
        assert kii == pytest.approx(168.75)
        assert kd == pytest.approx(-100.0)

    @given(kp=st.floats(0.0, 50.0), ki=st.floats(0.0, 50.0), kd=st.floats(0.0, 50.0))
    @settings(max_examples=50, deadline=None)
    def test_map_is_affine_in_source_gains(self, kp, ki, kd):
        one = np.array(map_ipid_to_pi2d(1.0, 0.01, kp, ki, kd))
        two = np.array(map_ipid_to_pi2d(1.0, 0.01, 2 * kp, 2 * ki, 2 * kd))
        zero = np.array(map_ipid_to_pi2d(1.0, 0.01, 0.0, 0.0, 0.0))
        assert np.allclose(two - one, one - zero, rtol=1e-12, atol=1e-9)

    def test_halving_h_doubles_kp_exactly(self):
        for alpha in (1.0, 2.0, 10.0):
            for h in (0.01, 0.02, 0.1):
                kp1, _ = map_ip_to_pi(alpha, h, 1.0)
                kp2, _ = map_ip_to_pi(alpha, h / 2, 1.0)
                assert kp2 == 2.0 * kp1

    def test_negative_proportional_gain(self):
        for alpha in (0.5, 1.0, 10.0):
            for h in (0.001, 0.01, 0.1):
                kp, _ = map_ip_to_pi(alpha, h, 3.0)
                assert kp < 0

    def test_zero_alpha_h_rejected(self):
        with pytest.raises(ConfigError):
            map_ip_to_pi(0.0, 0.01, 1.0)

    def test_build_gain_map(self):
        gm = build_gain_map("iP->PI", 1.0, 0.01, kp=1.8177)
        assert gm.direction == "iP->PI"
        assert gm.mapped["kp"] == pytest.approx(-100.0)
        with pytest.raises(ConfigError):
            build_gain_map("iP->PD", 1.0, 0.01, kp=1.0)


class TestSampledRecursions:
    def test_zero_error_zero_control(self):
        e = np.zeros(20)
        assert np.all(sampled_pi(e, 0.01, -100.0, 181.77) == 0.0)
        assert np.all(sampled_ipid(e, 0.01, 1.0, 1.0, 1.0, 1.0) == 0.0)

    def test_single_sample_unrolled(self):
        # e = (1, 0, 0, ...): u0 = kp + ki*h, then the kp increment reverses
        # and the control holds at ki*h
        e = np.array([1.0, 0.0, 0.0, 0.0])
        u = sampled_pi(e, 0.01, kp=-100.0, ki=181.77)
        assert u[0] == pytest.approx(-100.0 + 1.8177)
        assert u[1] == pytest.approx(1.8177)
        assert u[2] == pytest.approx(1.8177)
        assert u[3] == pytest.approx(1.8177)

    def test_sampled_ip_matches_by_hand(self):
        e = np.array([1.0, 0.0, 0.0, 0.0])
        u = sampled_ip(e, 0.01, alpha=1.0, kp=1.8177)
        assert u[0] == pytest.approx(-100.0 + 1.8177)
        assert u[1] == pytest.approx(1.8177)

    def test_constant_error_pid_increments_by_ki_h(self):
        e = np.ones(10)
        u = sampled_pid(e, 0.01, kp=2.0, ki=3.0, kd=0.5)
        inc = np.diff(u)
        # differences of a constant error vanish from the third sample on
        assert np.allclose(inc[2:], 3.0 * 0.01, rtol=1e-9)

    def test_batch_axis(self):
        e = np.random.default_rng(0).standard_normal((4, 30))
        u = sampled_pi(e, 0.01, -100.0, 181.77)
        assert u.shape == e.shape
        row = sampled_pi(e[2], 0.01, -100.0, 181.77)
        assert np.array_equal(u[2], row)


def _rel_dev(u_a, u_b):
    scale = max(1.0, float(np.max(np.abs(u_a))))
    return float(np.max(np.abs(u_a - u_b))) / scale


class TestEquivalence:
    H = 0.01
    ALPHA = 1.0

    def _random_errors(self, n=200, length=400, seed=1234):
        return np.random.default_rng(seed).standard_normal((n, length))

    def test_ip_pi_identical(self):
        e = self._random_errors()
        kp_s = 1.8177
        mapped = map_ip_to_pi(self.ALPHA, self.H, kp_s)
        dev = _rel_dev(sampled_ip(e, self.H, self.ALPHA, kp_s),
                       sampled_pi(e, self.H, *mapped))
        assert dev <= 1e-12

    def test_ipd_pid_identical(self):
        e = self._random_errors()
        mapped = map_ipd_to_pid(self.ALPHA, self.H, kp=1.375, kd=2.25)
        dev = _rel_dev(sampled_ipd(e, self.H, self.ALPHA, kp=1.375, kd=2.25),
                       sampled_pid(e, self.H, *mapped))
        assert dev <= 1e-12

    def test_ipi_pi2_identical(self):
        e = self._random_errors()
        mapped = map_ipi_to_pi2(self.ALPHA, self.H, kp=16.0, ki=25.0)
        dev = _rel_dev(sampled_ipi(e, self.H, self.ALPHA, kp=16.0, ki=25.0),
                       sampled_pi2(e, self.H, *mapped))
        assert dev <= 1e-12

    def test_ipid_pi2d_identical(self):
        e = self._random_errors()
        mapped = map_ipid_to_pi2d(self.ALPHA, self.H, kp=1.375, ki=1.6875, kd=2.25)
        dev = _rel_dev(sampled_ipid(e, self.H, self.ALPHA, kp=1.375, ki=1.6875, kd=2.25),
                       sampled_pi2d(e, self.H, *mapped))
        assert dev <= 1e-12

    @given(alpha=st.floats(0.1, 20.0), h=st.floats(0.001, 0.5),
           kp=st.floats(0.0, 30.0), seed=st.integers(0, 2**16))
    @settings(max_examples=25, deadline=None)
    def test_identity_holds_across_parameters(self, alpha, h, kp, seed):
        e = np.random.default_rng(seed).standard_normal(200)
        mapped = map_ip_to_pi(alpha, h, kp)
        dev = _rel_dev(sampled_ip(e, h, alpha, kp), sampled_pi(e, h, *mapped))
        assert dev <= 1e-12
