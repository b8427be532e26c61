"""Closed-loop engine: wires plant, estimator, controller, reference and noise.

Update order at every step k (one sample period te):

1. measure   y_meas = y_true + noise
2. feed the estimator with y_meas and the control commanded at step k-1
3. read the F estimate (0 while the estimator warms up)
4. evaluate the control law on e = y_meas - y*(k)
5. add the flat feedforward, if configured
6. apply the actuator fault, if configured
7. advance the plant with the effective control

The estimator deliberately consumes the *commanded* control: the controller
cannot know about an actuator fault, so a gain loss shows up as a shift in
the estimated lumped term and is compensated automatically. Classic
controllers are closed on (setpoint - measurement); intelligent laws carry
their feedback sign internally.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import controllers as ctl
from .controllers import ClassicGains, ControllerState, IntelligentGains
from .errors import ConfigError, DivergenceError
from .estimation import (ClosedLoopIPEstimator, FEstimate, OneStepEstimator,
                         OpenLoopEstimator, UltraLocalConfig)
from .plants import FaultSpec, PlantBase, apply_fault, flat_feedforward
from .signals import NoiseSource, ReferenceTrajectory, TimeGrid

_FIRST_ORDER = ("ip", "ipi", "igpi")
_SECOND_ORDER = ("ipd", "ipid")

DERIV_FILTER_TAU_SAMPLES = 5  # error-derivative low-pass, in sampling periods


@dataclass
class IntelligentController:
    """Tagged intelligent controller: kind in {ip, ipi, ipd, ipid, igpi}."""

    kind: str
    gains: IntelligentGains

    def __post_init__(self):
        if self.kind not in _FIRST_ORDER + _SECOND_ORDER:
            raise ConfigError(f"unknown intelligent controller: {self.kind!r}")


@dataclass
class ClassicController:
    """Tagged classic controller: kind in {pid, pi2d}."""

    kind: str
    gains: ClassicGains

    def __post_init__(self):
        if self.kind not in ("pid", "pi2d"):
            raise ConfigError(f"unknown classic controller: {self.kind!r}")


ControllerSpec = Union[IntelligentController, ClassicController]


@dataclass(frozen=True)
class Feedforward:
    """Flat feedforward u* = m*ddy* + k1_hat*y* added to the commanded control."""

    m: float
    k1_hat: float


@dataclass
class LoopConfig:
    """One closed loop: plant + controller (+ estimator) on a shared grid.

    The plant instance is consumed by the run; build a fresh config per run.
    """

    label: str
    grid: TimeGrid
    plant: PlantBase
    controller: ControllerSpec
    reference: ReferenceTrajectory
    noise: NoiseSource
    ultra_local: Optional[UltraLocalConfig] = None
    fault: Optional[FaultSpec] = None
    feedforward: Optional[Feedforward] = None
    field_stride: Optional[int] = None  # snapshot plant.field every N steps

    def validate(self) -> None:
        if isinstance(self.controller, IntelligentController):
            if self.ultra_local is None:
                raise ConfigError("intelligent controllers need an ultra_local config")
            nu = self.ultra_local.nu
            if self.controller.kind in _FIRST_ORDER and nu != 1:
                raise ConfigError(f"{self.controller.kind} requires nu = 1")
            if self.controller.kind in _SECOND_ORDER and nu != 2:
                raise ConfigError(f"{self.controller.kind} requires nu = 2")
            if self.controller.gains.alpha != self.ultra_local.alpha:
                raise ConfigError("controller and estimator must share alpha")
            self.ultra_local.validate_for(self.grid.te)
        if len(self.reference.ystar) != self.grid.n_steps:
            raise ConfigError("reference and grid lengths disagree")


@dataclass
class Metrics:
    """Tracking-error and control-effort summary over an evaluation window."""

    rms_error: float
    iae: float
    max_abs_error: float
    control_effort: float
    recovery_time: Optional[float] = None

    def as_dict(self) -> dict:
        out = {
            "rms_error": self.rms_error,
            "iae": self.iae,
            "max_abs_error": self.max_abs_error,
            "control_effort": self.control_effort,
        }
        if self.recovery_time is not None:
            out["recovery_time"] = self.recovery_time
        return out


CSV_COLUMNS = ("t", "setpoint", "y_ref", "dy_ref", "y_true", "y_meas",
               "u_cmd", "u_eff", "F_est", "aux")


@dataclass
class ClosedLoopRecord:
    """Per-step log of one closed-loop run plus header metadata."""

    label: str
    seed: int
    config_hash: str
    te: float
    fault_time: Optional[float]
    t: np.ndarray
    setpoint: np.ndarray
    ystar: np.ndarray
    dystar: np.ndarray
    y_true: np.ndarray
    y_meas: np.ndarray
    u_cmd: np.ndarray
    u_eff: np.ndarray
    f_est: np.ndarray
    aux: Optional[np.ndarray] = None
    field_t: Optional[np.ndarray] = None
    field_x: Optional[np.ndarray] = None
    field_w: Optional[np.ndarray] = None

    def columns(self) -> dict[str, np.ndarray]:
        cols = {
            "t": self.t, "setpoint": self.setpoint, "y_ref": self.ystar,
            "dy_ref": self.dystar, "y_true": self.y_true, "y_meas": self.y_meas,
            "u_cmd": self.u_cmd, "u_eff": self.u_eff, "F_est": self.f_est,
        }
        cols["aux"] = self.aux
        return cols

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(CSV_COLUMNS) + "\n")
            aux = self.aux
            for k in range(len(self.t)):
                row = [repr(float(a[k])) for a in
                       (self.t, self.setpoint, self.ystar, self.dystar,
                        self.y_true, self.y_meas, self.u_cmd, self.u_eff,
                        self.f_est)]
                row.append("" if aux is None else repr(float(aux[k])))
                fh.write(",".join(row) + "\n")

    def write_field_csv(self, path) -> None:
        if self.field_w is None:
            raise ConfigError("this record holds no field snapshots")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            header = ["t"] + [f"x={x:.6f}" for x in self.field_x]
            fh.write(",".join(header) + "\n")
            for ti, wi in zip(self.field_t, self.field_w):
                fh.write(",".join([repr(float(ti))] + [repr(float(w)) for w in wi]) + "\n")


def _config_hash(cfg: LoopConfig) -> str:
    parts = [cfg.label, repr(cfg.grid), repr(cfg.controller),
             repr(cfg.ultra_local), repr(cfg.fault), repr(cfg.feedforward),
             type(cfg.plant).__name__, str(cfg.noise.seed), str(cfg.noise.std)]
    return hashlib.sha256("|".join(parts).encode()).hexdigest()[:16]


def _build_estimator(cfg: LoopConfig):
    ul = cfg.ultra_local
    te = cfg.grid.te
    if ul.estimator == "open-loop-integral":
        return OpenLoopEstimator(alpha=1.0 if ul.beta != 0.0 else ul.alpha,
                                 window_len=ul.window_len, te=te, nu=ul.nu)
    if ul.estimator == "one-step":
        return OneStepEstimator(alpha=1.0 if ul.beta != 0.0 else ul.alpha,
                                nu=ul.nu, te=te)
    if ul.estimator == "closed-loop-ip":
        if cfg.controller.kind != "ip":
            raise ConfigError("the closed-loop estimator requires an iP in the loop")
        return ClosedLoopIPEstimator(alpha=ul.alpha, kp=cfg.controller.gains.kp,
                                     window_len=ul.window_len, te=te)
    raise ConfigError(f"unknown estimator variant: {ul.estimator!r}")


def run_closed_loop(cfg: LoopConfig) -> ClosedLoopRecord:
    """Run one closed loop over the full grid; deterministic given the seed."""
    cfg.validate()
    grid = cfg.grid
    te = grid.te
    n = grid.n_steps
    ref = cfg.reference
    intelligent = isinstance(cfg.controller, IntelligentController)
    gains = cfg.controller.gains
    state = ControllerState()
    estimator = _build_estimator(cfg) if intelligent else None
    deriv_tau = DERIV_FILTER_TAU_SAMPLES * te

    noise = cfg.noise.draw(n)
    t_arr = grid.times
    y_true = np.zeros(n)
    y_meas = np.zeros(n)
    u_cmd = np.zeros(n)
    u_eff = np.zeros(n)
    f_arr = np.zeros(n)
    aux_vals = []
    field_t, field_w = [], []

    # Estimator input channel: alpha*u for plain models, alpha*u + beta*int(u)
    # for the integral-of-control model (pushed with unit gain in that case).
    beta = cfg.ultra_local.beta if intelligent else 0.0
    w_prev = 0.0
    u_prev_cmd = 0.0

    for k in range(n):
        t = float(t_arr[k])
        yt = cfg.plant.output
        ym = yt + noise[k]
        e = ym - ref.ystar[k]

        f_est = 0.0
        if intelligent:
            if cfg.ultra_local.estimator == "closed-loop-ip":
                fe = estimator.update(t, float(ref.dystar[k]), float(e), u_prev_cmd)
            else:
                fe = estimator.update(t, float(ym), w_prev)
            f_est = fe.value if fe.ready else 0.0

            state.accumulate_error(e, te)
            kind = cfg.controller.kind
            if kind == "ip":
                u_law = ctl.ip(f_est, float(ref.dystar[k]), e, gains)
            elif kind == "ipi":
                u_law = ctl.ipi(f_est, float(ref.dystar[k]), e, state.int_e, gains)
            elif kind == "ipd":
                de = state.filtered_derivative(e, te, deriv_tau)
                u_law = ctl.ipd(f_est, float(ref.ddystar[k]), e, de, gains)
            elif kind == "ipid":
                de = state.filtered_derivative(e, te, deriv_tau)
                u_law = ctl.ipid(f_est, float(ref.ddystar[k]), e, de, state.int_e, gains)
            else:  # igpi
                u_law = ctl.igpi(f_est, float(ref.dystar[k]), e, state.int_e,
                                 state.int_int_e, state.int_u, gains)
        else:
            # Classic loops close on setpoint-minus-measurement so the usual
            # positive gain sets are stabilizing.
            if cfg.controller.kind == "pid":
                u_law = ctl.classic_pid(-e, state, gains, te)
            else:
                u_law = ctl.classic_pi2d(-e, state, gains, te)

        u_k = u_law
        if cfg.feedforward is not None:
            u_k += flat_feedforward(float(ref.ystar[k]), float(ref.ddystar[k]),
                                    cfg.feedforward.m, cfg.feedforward.k1_hat)
        if not np.isfinite(u_k):
            raise DivergenceError("control computation produced a non-finite value", step=k)
        ue = apply_fault(u_k, t, cfg.fault)

        y_true[k] = yt
        y_meas[k] = ym
        u_cmd[k] = u_k
        u_eff[k] = ue
        f_arr[k] = f_est
        aux_vals.append(cfg.plant.aux_value())
        if cfg.field_stride and k % cfg.field_stride == 0 and hasattr(cfg.plant, "field"):
            field_t.append(t)
            field_w.append(cfg.plant.field)

        if intelligent:
            if beta != 0.0:
                # The estimator sees the whole input channel alpha*u + beta*int(u)
                # (it was built with unit gain); int_u here is the integral up to
                # the instant u_k was issued, matching the value the law used.
                w_prev = gains.alpha * u_k + beta * state.int_u
            else:
                w_prev = u_k  # estimator applies alpha itself
            state.accumulate_control(u_k, te)
        u_prev_cmd = u_k

        if k < n - 1:
            cfg.plant.step(ue, te)

    aux = None
    if any(a is not None for a in aux_vals):
        aux = np.array([np.nan if a is None else a for a in aux_vals])
    rec = ClosedLoopRecord(
        label=cfg.label, seed=cfg.noise.seed, config_hash=_config_hash(cfg),
        te=te, fault_time=None if cfg.fault is None else cfg.fault.t_fault,
        t=t_arr, setpoint=ref.setpoint.copy(), ystar=ref.ystar.copy(),
        dystar=ref.dystar.copy(), y_true=y_true, y_meas=y_meas,
        u_cmd=u_cmd, u_eff=u_eff, f_est=f_arr, aux=aux,
        field_t=np.array(field_t) if field_t else None,
        field_x=getattr(cfg.plant, "x", None).copy() if field_t else None,
        field_w=np.array(field_w) if field_t else None,
    )
    return rec


def compute_metrics(rec: ClosedLoopRecord, eval_window: tuple[float, float],
                    band: float | None = None,
                    sustain: float = 0.5) -> Metrics:
    """Error metrics of the true output over [t0, t1], plus fault recovery time.

    Recovery time is measured from the fault instant to the first moment the
    true tracking error re-enters |e| <= band and stays there for ``sustain``
    seconds; it is reported only when the record carries a fault.
    """
    t0, t1 = eval_window
    if not t0 < t1:
        raise ConfigError("evaluation window must satisfy t0 < t1")
    mask = (rec.t >= t0) & (rec.t <= t1)
    if not mask.any():
        raise ConfigError("evaluation window contains no samples")
    err = rec.y_true[mask] - rec.ystar[mask]
    rms = float(np.sqrt(np.mean(err**2)))
    iae = float(np.sum(np.abs(err)) * rec.te)
    max_abs = float(np.max(np.abs(err)))
    effort = float(np.sum(rec.u_eff[mask] ** 2) * rec.te)

    recovery = None
    if rec.fault_time is not None and band is not None:
        e_full = rec.y_true - rec.ystar
        after = rec.t >= rec.fault_time
        idx = np.flatnonzero(after)
        inside = np.abs(e_full) <= band
        need = max(1, int(round(sustain / rec.te)))
        for i in idx:
            if i + need <= len(inside) and inside[i:i + need].all():
                recovery = float(rec.t[i] - rec.fault_time)
                break
    return Metrics(rms, iae, max_abs, effort, recovery)
