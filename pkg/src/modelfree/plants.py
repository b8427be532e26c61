"""Benchmark plants as steppable simulations, plus fault injection.

Each plant advances one sampling period per ``step(u, te)`` call with the
control held constant over the period (zero-order hold):

* ODE and transfer-function plants integrate with RK4 at 4 substeps;
* the delay plant uses RK4 with linear interpolation into its history;
* the heat rod uses explicit Euler substeps bounded by the diffusion limit.

A step whose new state is non-finite raises :class:`~modelfree.errors.DivergenceError`
carrying the step index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, DivergenceError
from .signals import NoiseSource


@dataclass(frozen=True)
class FaultSpec:
    """Actuator power loss: control is scaled by gain_factor from t_fault on."""

    t_fault: float
    gain_factor: float

    def __post_init__(self):
        if not 0.0 < self.gain_factor <= 1.0:
            raise ConfigError("gain_factor must lie in (0, 1]")


def apply_fault(u: float, t: float, fault: FaultSpec | None) -> float:
    """Effective control after the (optional) actuator fault."""
    if fault is None or t < fault.t_fault:
        return u
    return u * fault.gain_factor


@dataclass(frozen=True)
class TustinFriction:
    """Exponential stick-slip friction model, odd in velocity.

    Force magnitude decays from the static level fs to the Coulomb level fc
    with velocity scale vs, so the force flips violently when the speed
    changes sign.
    """

    fc: float = 0.25
    fs: float = 0.5
    vs: float = 0.1

    def __post_init__(self):
        if not (self.fs >= self.fc > 0):
            raise ConfigError("need fs >= fc > 0")
        if self.vs <= 0:
            raise ConfigError("need vs > 0")


def tustin_force(v: float, f: TustinFriction) -> float:
    """Friction force -sign(v) * (fc + (fs - fc) * exp(-|v|/vs)); 0 at rest."""
    if v == 0.0:
        return 0.0
    return -math.copysign(f.fc + (f.fs - f.fc) * math.exp(-abs(v) / f.vs), v)


def flat_feedforward(ystar: float, ddystar: float, m: float, k1_hat: float) -> float:
    """Nominal control u* = m*ddy* + k1_hat*y* inverting the flat model part."""
    if m <= 0:
        raise ConfigError("mass must be positive")
    return m * ddystar + k1_hat * ystar


def _rk4(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, dt: float,
         substeps: int = 4) -> np.ndarray:
    h = dt / substeps
    for _ in range(substeps):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return x


class PlantBase:
    """Shared stepping skeleton: advance, count, check finiteness."""

    def __init__(self):
        self.steps_taken = 0

    @property
    def output(self) -> float:
        raise NotImplementedError

    def aux_value(self) -> float | None:
        """Extra per-step quantity worth logging (delay plants report tau)."""
        return None

    def _advance(self, u: float, te: float) -> None:
        raise NotImplementedError

    def _finite(self) -> bool:
        raise NotImplementedError

    def step(self, u: float, te: float) -> float:
        if not math.isfinite(u):
            raise DivergenceError("non-finite control input", step=self.steps_taken)
        self._advance(u, te)
        self.steps_taken += 1
        if not self._finite():
            raise DivergenceError("plant state diverged", step=self.steps_taken)
        return self.output


class Oscillator(PlantBase):
    """Linear oscillator  y'' + c*y' + k*y = u  (k = 4 by default)."""

    def __init__(self, c: float = 3.0, k: float = 4.0,
                 y0: float = 0.0, v0: float = 0.0):
        super().__init__()
        self.c = c
        self.k = k
        self.state = np.array([y0, v0], dtype=float)

    @property
    def output(self) -> float:
        return float(self.state[0])

    def _rhs(self, x: np.ndarray, u: float) -> np.ndarray:
        return np.array([x[1], u - self.c * x[1] - self.k * x[0]])

    def _advance(self, u: float, te: float) -> None:
        self.state = _rk4(lambda x: self._rhs(x, u), self.state, te)

    def _finite(self) -> bool:
        return bool(np.isfinite(self.state).all())

    def energy(self) -> float:
        """Mechanical energy (v^2 + k*y^2)/2, non-increasing when u=0, c>0."""
        y, v = self.state
        return 0.5 * (v**2 + self.k * y**2)


class DuffingSpring(PlantBase):
    """Mass on a cubic-hardening spring with linear and stick-slip friction.

    m*y'' = -(k1*y + k3*y^3) + F_friction(y') - d*y' + u
    """

    def __init__(self, m: float = 0.5, k1: float = 3.0, k3: float = 2.0,
                 d: float = 1.0, friction: TustinFriction | None = None,
                 y0: float = 0.0, v0: float = 0.0):
        super().__init__()
        if m <= 0:
            raise ConfigError("mass must be positive")
        self.m = m
        self.k1 = k1
        self.k3 = k3
        self.d = d
        self.friction = friction if friction is not None else TustinFriction()
        self.state = np.array([y0, v0], dtype=float)

    @property
    def output(self) -> float:
        return float(self.state[0])

    def _rhs(self, x: np.ndarray, u: float) -> np.ndarray:
        y, v = x
        force = (-(self.k1 * y + self.k3 * y**3)
                 + tustin_force(v, self.friction) - self.d * v + u)
        return np.array([v, force / self.m])

    def _advance(self, u: float, te: float) -> None:
        self.state = _rk4(lambda x: self._rhs(x, u), self.state, te)

    def _finite(self) -> bool:
        return bool(np.isfinite(self.state).all())


class LTIPlant(PlantBase):
    """Strictly proper transfer function realized in controllable canonical form.

    ``num`` and ``den`` are coefficient lists in descending powers of s.
    """

    def __init__(self, num, den):
        super().__init__()
        num = np.atleast_1d(np.asarray(num, dtype=float))
        den = np.atleast_1d(np.asarray(den, dtype=float))
        num = np.trim_zeros(num, "f")
        den = np.trim_zeros(den, "f")
        if den.size == 0 or den[0] == 0:
            raise ConfigError("denominator must have a nonzero leading coefficient")
        if num.size >= den.size:
            raise ConfigError("transfer function must be strictly proper")
        num = num / den[0]
        den = den / den[0]
        n = den.size - 1
        self.A = np.zeros((n, n))
        self.A[:-1, 1:] = np.eye(n - 1)
        self.A[-1, :] = -den[::-1][:-1]
        self.B = np.zeros(n)
        self.B[-1] = 1.0
        self.C = np.zeros(n)
        self.C[: num.size] = num[::-1]
        self.state = np.zeros(n)

    @property
    def output(self) -> float:
        return float(self.C @ self.state)

    def dc_gain(self) -> float:
        return float(-self.C @ np.linalg.solve(self.A, self.B))

    def _advance(self, u: float, te: float) -> None:
        self.state = _rk4(lambda x: self.A @ x + self.B * u, self.state, te)

    def _finite(self) -> bool:
        return bool(np.isfinite(self.state).all())


def lti_nominal() -> LTIPlant:
    """(s+2)^2 / (s+1)^3"""
    return LTIPlant(num=[1.0, 4.0, 4.0], den=[1.0, 3.0, 3.0, 1.0])


def lti_aging() -> LTIPlant:
    """(s+2)^2 / (s+2.2)^3 -- the nominal plant with drifted poles."""
    den = np.polymul(np.polymul([1.0, 2.2], [1.0, 2.2]), [1.0, 2.2])
    return LTIPlant(num=[1.0, 4.0, 4.0], den=den)


def lti_nonminimum_phase() -> LTIPlant:
    """(s-1) / ((s+1)(s+2)) -- one unstable zero."""
    return LTIPlant(num=[1.0, -1.0], den=[1.0, 3.0, 2.0])


class NonlinearCubic(PlantBase):
    """Unstable scalar plant  y' = y + u^3."""

    def __init__(self, y0: float = 0.0):
        super().__init__()
        self.state = np.array([y0], dtype=float)

    @property
    def output(self) -> float:
        return float(self.state[0])

    def _advance(self, u: float, te: float) -> None:
        # numpy power overflows to inf (caught by the finiteness check)
        # where the plain-float power would raise OverflowError
        uc = float(np.float64(u) ** 3)
        self.state = _rk4(lambda x: x + uc, self.state, te)

    def _finite(self) -> bool:
        return bool(np.isfinite(self.state).all())


def delay_walk(tau_prev: float, te: float, noise: NoiseSource) -> float:
    """Random-walk delay update tau + 10*te*sign(N), clamped to [0, 5] seconds."""
    draw = float(noise.draw(1)[0])
    return min(5.0, max(0.0, tau_prev + 10.0 * te * float(np.sign(draw))))


class DelayPlant(PlantBase):
    """Unstable delay system  y'(t) = y(t) + 5*y(t - tau) + u  with wandering tau.

    The delay performs a clamped random walk driven by ``walk_noise``; history
    is kept on the sampling grid and interpolated linearly at t - tau. The
    initial history is the constant initial state.
    """

    def __init__(self, walk_noise: NoiseSource, tau0: float = 2.5,
                 a: float = 1.0, b: float = 5.0, y0: float = 0.0,
                 tau_max: float = 5.0):
        super().__init__()
        if not 0.0 <= tau0 <= tau_max:
            raise ConfigError(f"tau0 must lie in [0, {tau_max}]")
        self.a = a
        self.b = b
        self.tau = tau0
        self.tau_max = tau_max
        self.walk_noise = walk_noise
        self.t = 0.0
        self._hist_t = [0.0]
        self._hist_y = [float(y0)]

    @property
    def output(self) -> float:
        return self._hist_y[-1]

    def aux_value(self) -> float:
        return self.tau

    def _delayed(self, t_query: float) -> float:
        # np.interp clamps at both ends: before 0 this returns the constant
        # initial history, past the newest sample the newest value.
        return float(np.interp(t_query, self._hist_t, self._hist_y))

    def _advance(self, u: float, te: float) -> None:
        self.tau = delay_walk(self.tau, te, self.walk_noise)
        h = te / 4.0
        t, y = self.t, self._hist_y[-1]
        for _ in range(4):
            def rhs(ts: float, ys: float) -> float:
                return self.a * ys + self.b * self._delayed(ts - self.tau) + u
            k1 = rhs(t, y)
            k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(t + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
        self.t += te
        self._hist_t.append(self.t)
        self._hist_y.append(float(y))
        horizon = self.tau_max + 2.0 * te
        while self._hist_t[-1] - self._hist_t[1] > horizon and len(self._hist_t) > 3:
            self._hist_t.pop(0)
            self._hist_y.pop(0)

    def _finite(self) -> bool:
        return math.isfinite(self._hist_y[-1])


class HeatRod(PlantBase):
    """Semi-linear 1-D heat equation with boundary control at the far end.

    w_t = w_xx + f(w) on [0, length]; w(t, 0) = c is pinned, w(t, length) = u(t)
    is the control; the output is w at the probe position x_c (linear
    interpolation between grid points). Initial profile:
    sin(pi*x/length) + (u0 - c) * x / length + c with u0 = 0.

    Internal explicit-Euler substeps always satisfy dt <= 0.5 * dx^2.
    """

    def __init__(self, x_c: float, c: float = 0.0,
                 f: Callable[[np.ndarray], np.ndarray] | None = None,
                 length: float = 1.0, n_x: int = 101):
        super().__init__()
        if n_x < 5:
            raise ConfigError("need n_x >= 5 grid points")
        if not 0.0 < x_c < length:
            raise ConfigError("probe position must be interior")
        self.length = length
        self.c = c
        self.f = f
        self.x = np.linspace(0.0, length, n_x)
        self.dx = self.x[1] - self.x[0]
        self.x_c = x_c
        self.last_substep_dt = 0.0
        u0 = 0.0
        self.w = np.sin(np.pi * self.x / length) + (u0 - c) * self.x / length + c
        self.w[0] = c
        self.w[-1] = u0

    @property
    def output(self) -> float:
        return float(np.interp(self.x_c, self.x, self.w))

    @property
    def field(self) -> np.ndarray:
        return self.w.copy()

    def _advance(self, u: float, te: float) -> None:
        # Target 0.45*dx^2 so the stiffest mode is actually damped; this keeps
        # the substep strictly inside the 0.5*dx^2 stability bound.
        dt_limit = 0.45 * self.dx**2
        m = max(1, int(math.ceil(te / dt_limit)))
        dt = te / m
        self.last_substep_dt = dt
        w = self.w
        for _ in range(m):
            w[0] = self.c
            w[-1] = u
            lap = (w[:-2] - 2.0 * w[1:-1] + w[2:]) / self.dx**2
            react = self.f(w[1:-1]) if self.f is not None else 0.0
            w[1:-1] = w[1:-1] + dt * (lap + react)
        w[0] = self.c
        w[-1] = u

    def _finite(self) -> bool:
        return bool(np.isfinite(self.w).all())
