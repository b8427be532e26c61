"""Time grids, sliding sample windows, reference trajectories and measurement noise.

Everything here is deterministic given its inputs; the only random object is
:class:`NoiseSource`, which owns a seeded generator.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import simpson

from .errors import ConfigError, NotReadyError


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid with points k*te, k = 0 .. n_steps-1."""

    te: float
    duration: float

    def __post_init__(self):
        if self.te <= 0:
            raise ConfigError(f"sampling period must be positive, got {self.te}")
        if self.duration <= 0:
            raise ConfigError(f"duration must be positive, got {self.duration}")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.te)) + 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps) * self.te


class SampleWindow:
    """Fixed-capacity sliding window of uniformly spaced (timestamp, value) samples.

    Pushing beyond capacity evicts the oldest entry, so a full window always
    covers the trailing span L = (capacity - 1) * te.
    """

    def __init__(self, capacity: int):
        if capacity < 2:
            raise ConfigError(f"window capacity must be >= 2, got {capacity}")
        self.capacity = capacity
        self._t: deque[float] = deque(maxlen=capacity)
        self._v: deque[float] = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self._t)

    @property
    def full(self) -> bool:
        return len(self._t) == self.capacity

    @property
    def length(self) -> float:
        """Time span L covered by the current samples."""
        if len(self._t) < 2:
            return 0.0
        return self._t[-1] - self._t[0]

    def push(self, t: float, value: float) -> None:
        if self._t and t <= self._t[-1]:
            raise ConfigError(f"timestamps must be strictly increasing ({t} after {self._t[-1]})")
        if len(self._t) >= 2:
            te = self._t[-1] - self._t[-2]
            if abs((t - self._t[-1]) - te) > 1e-9 * max(1.0, te):
                raise ConfigError("window samples must be uniformly spaced")
        self._t.append(float(t))
        self._v.append(float(value))

    def times(self) -> np.ndarray:
        return np.array(self._t)

    def values(self) -> np.ndarray:
        return np.array(self._v)


def window_quadrature(window: SampleWindow, weight: Callable[[float], float],
                      rule: str = "trapezoid") -> float:
    """Approximate the integral of weight(sigma) * value(sigma) over the window.

    sigma is window-local time: 0 at the oldest sample, L at the newest.
    The default rule is the trapezoid (exact for integrands affine in sigma).
    ``rule="simpson"`` uses composite Simpson weights on the sampled product,
    exact through cubic integrands. ``rule="gauss"`` models the sampled
    signal as piecewise quadratics and integrates weight * quadratic with
    4-point Gauss nodes per panel, which is exact whenever the weight is a
    polynomial of degree <= 5; the higher-order estimation filters need this
    to keep their sharp error budget.
    """
    if len(window) < 2:
        raise NotReadyError("window quadrature needs at least 2 samples")
    sigma = window.times()
    sigma = sigma - sigma[0]
    values = window.values()
    if rule == "gauss":
        return _product_gauss(sigma, values, weight)
    w = np.array([float(weight(s)) for s in sigma])
    f = w * values
    if rule == "trapezoid":
        return float(np.trapezoid(f, sigma))
    if rule == "simpson":
        return float(simpson(f, x=sigma))
    raise ConfigError(f"unknown quadrature rule: {rule!r}")


# 4-point Gauss-Legendre on [-1, 1], exact through degree-7 polynomials
_GAUSS_NODES = np.array([-0.8611363115940526, -0.3399810435848563,
                         0.3399810435848563, 0.8611363115940526])
_GAUSS_WEIGHTS = np.array([0.34785484513745385, 0.6521451548625461,
                           0.6521451548625461, 0.34785484513745385])


def _panel_gauss(s0, s2, coeffs, weight) -> float:
    # integrate weight(s) * quadratic(s) over [s0, s2] with 3 Gauss points
    half = 0.5 * (s2 - s0)
    mid = 0.5 * (s0 + s2)
    total = 0.0
    for node, wq in zip(_GAUSS_NODES, _GAUSS_WEIGHTS):
        s = mid + half * node
        p = coeffs[0] + s * (coeffs[1] + s * coeffs[2])
        total += wq * float(weight(s)) * p
    return half * total


def _quad_coeffs(s, f) -> tuple[float, float, float]:
    # quadratic through three samples via divided differences,
    # coefficients in increasing powers
    d01 = (f[1] - f[0]) / (s[1] - s[0])
    d12 = (f[2] - f[1]) / (s[2] - s[1])
    c2 = (d12 - d01) / (s[2] - s[0])
    c1 = d01 - c2 * (s[0] + s[1])
    c0 = f[0] - s[0] * (c1 + c2 * s[0])
    return (c0, c1, c2)


def _product_gauss(sigma, values, weight) -> float:
    n = len(sigma)
    if n == 2:
        c1 = (values[1] - values[0]) / (sigma[1] - sigma[0])
        coeffs = (values[0] - c1 * sigma[0], c1, 0.0)
        return _panel_gauss(sigma[0], sigma[1], coeffs, weight)
    total = 0.0
    full_pairs_end = n - 1 if n % 2 == 1 else n - 2
    for j in range(0, full_pairs_end - 1, 2):
        coeffs = _quad_coeffs(sigma[j:j + 3], values[j:j + 3])
        total += _panel_gauss(sigma[j], sigma[j + 2], coeffs, weight)
    if n % 2 == 0:
        # odd interval count: close the last interval with the quadratic
        # through the final three samples
        coeffs = _quad_coeffs(sigma[-3:], values[-3:])
        total += _panel_gauss(sigma[-2], sigma[-1], coeffs, weight)
    return total


@dataclass(frozen=True)
class ReferenceTrajectory:
    """Reference signal with analytic first and second derivatives.

    ``setpoint`` is the underlying piecewise-constant target; ``ystar`` joins
    successive levels smoothly and equals the setpoint outside transitions.
    """

    grid: TimeGrid
    ystar: np.ndarray
    dystar: np.ndarray
    ddystar: np.ndarray
    setpoint: np.ndarray

    @property
    def span(self) -> float:
        return float(np.max(self.setpoint) - np.min(self.setpoint))


def _quintic(tau: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # C2 s-curve on [0, 1]: s(0)=0, s(1)=1, s'=s''=0 at both ends.
    s = tau**3 * (10.0 - 15.0 * tau + 6.0 * tau**2)
    ds = 30.0 * tau**2 * (1.0 - tau) ** 2
    dds = 60.0 * tau * (1.0 - tau) * (1.0 - 2.0 * tau)
    return s, ds, dds


def make_reference(setpoints: Sequence[tuple[float, float]], transition_time: float,
                   grid: TimeGrid) -> ReferenceTrajectory:
    """Build a reference that joins setpoint levels by quintic transitions.

    ``setpoints`` is a list of (time, level) pairs with strictly increasing
    times inside [0, duration]; the first pair fixes the initial level, each
    later pair starts a transition of ``transition_time`` seconds at its time.
    ``transition_time = 0`` degenerates to steps with zero derivatives.
    """
    if not setpoints:
        raise ConfigError("at least one setpoint is required")
    if transition_time < 0:
        raise ConfigError("transition_time must be >= 0")
    times = [float(t) for t, _ in setpoints]
    levels = [float(v) for _, v in setpoints]
    if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
        raise ConfigError("setpoint times must be strictly increasing")
    if times[0] < 0 or times[-1] > grid.duration:
        raise ConfigError("setpoint times must lie within [0, duration]")
    for t1, t2 in zip(times[1:], times[2:]):
        if t2 < t1 + transition_time:
            raise ConfigError("setpoint transitions must not overlap")

    t = grid.times
    ystar = np.full_like(t, levels[0], dtype=float)
    dystar = np.zeros_like(t)
    ddystar = np.zeros_like(t)
    setpoint = np.full_like(t, levels[0], dtype=float)

    for t_i, level, prev in zip(times[1:], levels[1:], levels[:-1]):
        delta = level - prev
        setpoint[t >= t_i] = level
        if transition_time == 0.0:
            ystar[t >= t_i] = level
            continue
        after = t >= t_i + transition_time
        ystar[after] = level
        dystar[after] = 0.0
        ddystar[after] = 0.0
        inside = (t >= t_i) & ~after
        tau = (t[inside] - t_i) / transition_time
        s, ds, dds = _quintic(tau)
        ystar[inside] = prev + delta * s
        dystar[inside] = delta * ds / transition_time
        ddystar[inside] = delta * dds / transition_time**2

    return ReferenceTrajectory(grid=grid, ystar=ystar, dystar=dystar,
                               ddystar=ddystar, setpoint=setpoint)


class NoiseSource:
    """Reproducible stream of zero-mean Gaussian samples with a fixed std.

    Two sources built with the same seed produce identical streams. A source
    is single-owner: it must not be shared across concurrently running loops.
    """

    def __init__(self, seed: int, std: float):
        if std < 0:
            raise ConfigError(f"noise std must be >= 0, got {std}")
        self.seed = int(seed)
        self.std = float(std)
        self._rng = np.random.default_rng(self.seed)

    def draw(self, n: int) -> np.ndarray:
        if n < 0:
            raise ConfigError(f"sample count must be >= 0, got {n}")
        return self.std * self._rng.standard_normal(n)


def noise_stream(source: NoiseSource, n: int) -> np.ndarray:
    """Next ``n`` pseudo-random draws from the source."""
    return source.draw(n)
