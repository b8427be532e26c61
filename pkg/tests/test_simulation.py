import math

import numpy as np
import pytest

from modelfree.controllers import ClassicGains, IntelligentGains
from modelfree.errors import ConfigError
from modelfree.estimation import UltraLocalConfig
from modelfree.plants import NonlinearCubic, Oscillator, PlantBase
from modelfree.signals import NoiseSource, TimeGrid, make_reference
from modelfree.simulation import (ClassicController, ClosedLoopRecord,
                                  Feedforward, IntelligentController,
                                  LoopConfig, compute_metrics, run_closed_loop)


def constant_reference(grid, level=0.0):
    return make_reference([(0.0, level)], 0.0, grid)


def ip_loop(plant, grid, ref, noise, kp=1.5, alpha=1.0,
            estimator="open-loop-integral", window_len=0.1, label="ip"):
    return LoopConfig(
        label=label, grid=grid, plant=plant,
        controller=IntelligentController("ip", IntelligentGains(alpha=alpha, kp=kp)),
        ultra_local=UltraLocalConfig(nu=1, alpha=alpha, estimator=estimator,
                                     window_len=window_len),
        reference=ref, noise=noise)


class TestFixedPoint:
    def test_resting_plant_zero_reference_stays_zero(self):
        grid = TimeGrid(0.01, 2.0)
        cfg = ip_loop(Oscillator(c=3.0), grid, constant_reference(grid),
                      NoiseSource(0, 0.0))
        rec = run_closed_loop(cfg)
        assert np.all(rec.y_true == 0.0)
        assert np.all(rec.u_cmd == 0.0)
        assert np.all(rec.f_est == 0.0)


class TestDeterminism:
    def test_identical_runs_are_byte_identical(self, tmp_path):
        def one(path):
            grid = TimeGrid(0.01, 3.0)
            ref = make_reference([(0.0, 0.0), (1.0, 1.0)], 1.0, grid)
            cfg = ip_loop(Oscillator(c=3.0), grid, ref, NoiseSource(9, 0.03),
                          kp=1.5)
            rec = run_closed_loop(cfg)
            rec.write_csv(path)
            return path.read_bytes()

        a = one(tmp_path / "a.csv")
        b = one(tmp_path / "b.csv")
        assert a == b


class TestCausality:
    def test_future_reference_changes_do_not_affect_past(self):
        grid = TimeGrid(0.01, 6.0)
        ref_a = make_reference([(0.0, 0.0), (1.0, 1.0)], 1.0, grid)
        ref_b = make_reference([(0.0, 0.0), (1.0, 1.0), (4.0, 2.0)], 1.0, grid)
        rec_a = run_closed_loop(ip_loop(Oscillator(c=3.0), grid, ref_a,
                                        NoiseSource(2, 0.03)))
        rec_b = run_closed_loop(ip_loop(Oscillator(c=3.0), grid, ref_b,
                                        NoiseSource(2, 0.03)))
        k_split = int(round(4.0 / 0.01))
        assert np.array_equal(rec_a.y_true[:k_split], rec_b.y_true[:k_split])
        assert np.array_equal(rec_a.u_cmd[:k_split], rec_b.u_cmd[:k_split])
        assert not np.array_equal(rec_a.u_cmd[k_split:], rec_b.u_cmd[k_split:])


class TestInVivoCancellation:
    def test_ip_onestep_reproduces_first_order_decay(self):
        # noiseless iP with the one-step estimate on y' = y + u^3: after a
        # setpoint step the error decays like exp(-Kp t)
        te, kp = 0.01, 2.2727
        grid = TimeGrid(te, 6.0)
        ref = make_reference([(0.0, 0.0), (1.0, 0.5)], 0.0, grid)
        cfg = ip_loop(NonlinearCubic(), grid, ref, NoiseSource(0, 0.0),
                      kp=kp, estimator="one-step")
        rec = run_closed_loop(cfg)
        e = rec.y_true - rec.ystar
        k0 = int(round(1.2 / te))
        k1 = int(round(2.0 / te))
        measured = math.log(abs(e[k0]) / abs(e[k1])) / ((k1 - k0) * te)
        assert measured == pytest.approx(kp, rel=0.2)


class TestSteadyStateExactness:
    def test_noise_free_integral_action_zeroes_the_error(self):
        grid = TimeGrid(0.01, 20.0)
        ref = make_reference([(0.0, 1.0)], 0.0, grid)
        cfg = LoopConfig(
            label="ipi", grid=grid, plant=Oscillator(c=3.0),
            controller=IntelligentController(
                "ipi", IntelligentGains(alpha=1.0, kp=16.0, ki=25.0)),
            ultra_local=UltraLocalConfig(nu=1, alpha=1.0,
                                         estimator="open-loop-integral",
                                         window_len=2.0),
            reference=ref, noise=NoiseSource(0, 0.0))
        rec = run_closed_loop(cfg)
        assert abs(rec.y_true[-1] - 1.0) <= 1e-6


class TestValidation:
    def test_order_mismatch_rejected(self):
        grid = TimeGrid(0.01, 1.0)
        cfg = LoopConfig(
            label="bad", grid=grid, plant=Oscillator(),
            controller=IntelligentController("ipd", IntelligentGains(alpha=1.0, kp=1.0)),
            ultra_local=UltraLocalConfig(nu=1, alpha=1.0),
            reference=constant_reference(grid), noise=NoiseSource(0, 0.0))
        with pytest.raises(ConfigError):
            run_closed_loop(cfg)

    def test_alpha_mismatch_rejected(self):
        grid = TimeGrid(0.01, 1.0)
        cfg = LoopConfig(
            label="bad", grid=grid, plant=Oscillator(),
            controller=IntelligentController("ip", IntelligentGains(alpha=2.0, kp=1.0)),
            ultra_local=UltraLocalConfig(nu=1, alpha=1.0),
            reference=constant_reference(grid), noise=NoiseSource(0, 0.0))
        with pytest.raises(ConfigError):
            run_closed_loop(cfg)

    def test_missing_ultra_local_rejected(self):
        grid = TimeGrid(0.01, 1.0)
        cfg = LoopConfig(
            label="bad", grid=grid, plant=Oscillator(),
            controller=IntelligentController("ip", IntelligentGains(alpha=1.0, kp=1.0)),
            reference=constant_reference(grid), noise=NoiseSource(0, 0.0))
        with pytest.raises(ConfigError):
            run_closed_loop(cfg)

    def test_unknown_controller_kind_rejected(self):
        with pytest.raises(ConfigError):
            IntelligentController("ipp", IntelligentGains(alpha=1.0))
        with pytest.raises(ConfigError):
            ClassicController("lqr", ClassicGains())


class TestRecordAndMetrics:
    def _synthetic_record(self, e_value=0.1, duration=10.0, te=0.01,
                          fault_time=None):
        n = int(round(duration / te)) + 1
        t = np.arange(n) * te
        ystar = np.ones(n)
        y_true = ystar + e_value
        return ClosedLoopRecord(
            label="synthetic", seed=0, config_hash="x", te=te,
            fault_time=fault_time, t=t, setpoint=ystar.copy(),
            ystar=ystar, dystar=np.zeros(n), y_true=y_true,
            y_meas=y_true.copy(), u_cmd=np.zeros(n), u_eff=np.zeros(n),
            f_est=np.zeros(n))

    def test_perfect_tracking_zero_metrics(self):
        rec = self._synthetic_record(e_value=0.0)
        m = compute_metrics(rec, (0.0, 10.0))
        assert m.rms_error == 0.0
        assert m.iae == 0.0
        assert m.max_abs_error == 0.0

    def test_constant_error_closed_forms(self):
        rec = self._synthetic_record(e_value=0.1)
        m = compute_metrics(rec, (0.0, 10.0))
        assert m.rms_error == pytest.approx(0.1, rel=1e-9)
        assert m.iae == pytest.approx(0.1 * 10.0, rel=2e-3)
        assert m.max_abs_error == pytest.approx(0.1)

    def test_recovery_time_absent_without_fault(self):
        rec = self._synthetic_record()
        m = compute_metrics(rec, (0.0, 10.0), band=0.05)
        assert m.recovery_time is None

    def test_recovery_time_measured_from_fault(self):
        rec = self._synthetic_record(e_value=0.0, fault_time=4.0)
        e = np.zeros_like(rec.t)
        e[(rec.t >= 4.0) & (rec.t < 6.0)] = 0.2  # outside band until t=6
        rec.y_true = rec.ystar + e
        m = compute_metrics(rec, (0.0, 10.0), band=0.05)
        assert m.recovery_time == pytest.approx(2.0, abs=0.02)

    def test_empty_window_rejected(self):
        rec = self._synthetic_record()
        with pytest.raises(ConfigError):
            compute_metrics(rec, (5.0, 5.0))
        with pytest.raises(ConfigError):
            compute_metrics(rec, (100.0, 200.0))

    def test_csv_schema(self, tmp_path):
        rec = self._synthetic_record()
        path = tmp_path / "rec.csv"
        rec.write_csv(path)
        header = path.read_text().splitlines()[0]
        assert header == "t,setpoint,y_ref,dy_ref,y_true,y_meas,u_cmd,u_eff,F_est,aux"
        n_rows = len(path.read_text().splitlines()) - 1
        assert n_rows == len(rec.t)


class TestFaultAccommodation:
    def test_estimator_sees_commanded_control(self):
        # With the estimator fed the commanded (not effective) control, an
        # actuator gain loss is absorbed into the estimated lumped term and
        # the loop recovers with no steady offset.
        from modelfree.plants import FaultSpec

        class Integrator(PlantBase):
            def __init__(self):
                super().__init__()
                self.y = 0.0

            @property
            def output(self):
                return self.y

            def _advance(self, u, te):
                self.y += te * (1.0 + u)

            def _finite(self):
                return math.isfinite(self.y)

        grid = TimeGrid(0.01, 30.0)
        ref = make_reference([(0.0, 1.0)], 0.0, grid)
        cfg = ip_loop(Integrator(), grid, ref, NoiseSource(0, 0.0), kp=1.5,
                      estimator="one-step")
        cfg.fault = FaultSpec(t_fault=15.0, gain_factor=0.5)
        rec = run_closed_loop(cfg)
        e = rec.y_true - rec.ystar
        assert abs(e[int(14.0 / 0.01)]) <= 1e-3
        assert abs(e[-1]) <= 1e-3  # fully re-accommodated
        k_fault = int(15.0 / 0.01)
        assert np.all(rec.u_eff[k_fault + 1:] == 0.5 * rec.u_cmd[k_fault + 1:])
        assert np.all(rec.u_eff[:k_fault] == rec.u_cmd[:k_fault])


class TestFeedforward:
    def test_feedforward_added_to_command(self):
        grid = TimeGrid(0.01, 1.0)
        ref = make_reference([(0.0, 1.0)], 0.0, grid)
        cfg = LoopConfig(
            label="pid", grid=grid, plant=Oscillator(c=3.0),
            controller=ClassicController("pid", ClassicGains(kp=0.0)),
            reference=ref, noise=NoiseSource(0, 0.0),
            feedforward=Feedforward(m=0.5, k1_hat=2.0))
        rec = run_closed_loop(cfg)
        # zero-gain controller: the command is exactly the feedforward
        assert np.allclose(rec.u_cmd, 2.0)
