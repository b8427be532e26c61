"""Online estimation of the lumped term F of an ultra-local model.

An ultra-local model y^(nu) = F + alpha*u replaces whatever the plant really
is over a short sliding window; F is re-identified continuously and absorbs
unmodeled dynamics and disturbances. Three estimator variants are provided:

* ``open-loop-integral``  -- integral filter over a window of (y, u) samples,
  F = -(6/L^3) * integral of ((L-2s)*y(s) + alpha*s*(L-s)*u(s)) ds, which
  annihilates any constant offset in y and low-passes measurement noise;
* ``closed-loop-ip``      -- window mean of (dy*/dt - alpha*u + Kp*e), valid
  when an intelligent proportional controller with the same alpha, Kp closes
  the loop;
* ``one-step``            -- F = backward-difference derivative of y minus
  alpha times the previously applied control.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .signals import SampleWindow, window_quadrature

_ESTIMATOR_VARIANTS = ("open-loop-integral", "closed-loop-ip", "one-step")


@dataclass(frozen=True)
class UltraLocalConfig:
    """Everything needed to run an ultra-local model estimate.

    ``beta`` is the gain of an extra integral-of-control input channel and is
    0 for all controllers except the generalized PI family.
    """

    nu: int = 1
    alpha: float = 1.0
    beta: float = 0.0
    estimator: str = "open-loop-integral"
    window_len: float = 0.1

    def __post_init__(self):
        if self.nu not in (1, 2):
            raise ConfigError(f"derivative order must be 1 or 2, got {self.nu}")
        if self.alpha == 0:
            raise ConfigError("alpha must be nonzero")
        if self.estimator not in _ESTIMATOR_VARIANTS:
            raise ConfigError(f"unknown estimator variant: {self.estimator!r}")

    def validate_for(self, te: float) -> None:
        if self.estimator != "one-step" and self.window_len < 2 * te:
            raise ConfigError(
                f"window_len must be >= 2*te for integral estimators "
                f"({self.window_len} < {2 * te})")


@dataclass(frozen=True)
class FEstimate:
    """One F estimate; ``value`` is 0 until the estimator is ready."""

    value: float
    t: float
    ready: bool


def _check_aligned(*windows: SampleWindow) -> None:
    first = windows[0]
    for w in windows[1:]:
        if w.capacity != first.capacity:
            raise ConfigError("estimation windows must have equal capacity")
        if len(w) == len(first) and len(w) >= 1:
            if abs(w.times()[0] - first.times()[0]) > 1e-12 or \
               abs(w.times()[-1] - first.times()[-1]) > 1e-12:
                raise ConfigError("estimation windows must share the same timestamps")
        elif len(w) != len(first):
            raise ConfigError("estimation windows must hold the same number of samples")


def estimate_openloop(y_win: SampleWindow, u_win: SampleWindow, alpha: float) -> FEstimate:
    """Integral-filter estimate of F from aligned output and control windows.

    Simpson weights are used for the quadrature: the integrand is a product
    of degree <= 2 polynomials with the sampled signals, and the leading
    -6/L^3 factor amplifies trapezoid error past the useful accuracy.
    Adding any constant to y leaves the result unchanged (the (L-2s) weight
    integrates to zero).
    """
    t_last = y_win.times()[-1] if len(y_win) else 0.0
    if not (y_win.full and u_win.full):
        return FEstimate(0.0, float(t_last), False)
    _check_aligned(y_win, u_win)
    L = y_win.length
    y_part = window_quadrature(y_win, lambda s: L - 2.0 * s, rule="simpson")
    u_part = window_quadrature(u_win, lambda s: s * (L - s), rule="simpson")
    phi = -(6.0 / L**3) * (y_part + alpha * u_part)
    return FEstimate(phi, float(t_last), True)


def estimate_openloop_second(y_win: SampleWindow, u_win: SampleWindow,
                             alpha: float) -> FEstimate:
    """Integral-filter estimate of F for the second-order model y'' = F + alpha*u.

    Derived like the first-order filter but with both initial conditions
    (offset and slope) annihilated, which needs a second s-derivative:

        F = (360/L^6) * integral of
              ((L-s)*s^2 - 2*(L-s)^2*s + (L-s)^3/3) * y(s)
            - (alpha/6) * (L-s)^3 * s^2 * u(s)   ds over [0, L]

    The y-kernel integrates any affine signal to exactly zero, and a constant
    F with constant u is recovered exactly (the kernel moments are L^6/360).
    """
    t_last = y_win.times()[-1] if len(y_win) else 0.0
    if not (y_win.full and u_win.full):
        return FEstimate(0.0, float(t_last), False)
    _check_aligned(y_win, u_win)
    L = y_win.length

    def y_kernel(s: float) -> float:
        r = L - s
        return r * s**2 - 2.0 * r**2 * s + r**3 / 3.0

    # the cubic kernels push the integrand past Simpson's exactness degree;
    # the product-Gauss rule keeps polynomial signals exact
    y_part = window_quadrature(y_win, y_kernel, rule="gauss")
    u_part = window_quadrature(u_win, lambda s: (L - s) ** 3 * s**2, rule="gauss")
    phi = (360.0 / L**6) * (y_part - (alpha / 6.0) * u_part)
    return FEstimate(phi, float(t_last), True)


def estimate_closedloop_ip(dystar_win: SampleWindow, u_win: SampleWindow,
                           e_win: SampleWindow, alpha: float, kp: float) -> FEstimate:
    """Window-mean estimate of F with an intelligent P controller in the loop.

    Returns the mean of (dy*/dt - alpha*u + Kp*e) over the window. The sign
    of the Kp term follows the controller convention u = -(F - dy* + Kp*e)/alpha:
    substituting that law gives an integrand F_prev + 2*Kp*e, so the window
    mean keeps correcting until e vanishes and the estimate settles on the
    true lumped term. (With the opposite sign the integrand collapses to the
    previous estimate and the estimator never learns.)
    """
    t_last = e_win.times()[-1] if len(e_win) else 0.0
    if not (dystar_win.full and u_win.full and e_win.full):
        return FEstimate(0.0, float(t_last), False)
    _check_aligned(dystar_win, u_win, e_win)
    L = e_win.length
    integrand = dystar_win.values() - alpha * u_win.values() + kp * e_win.values()
    sigma = e_win.times()
    phi = float(np.trapezoid(integrand, sigma - sigma[0])) / L
    return FEstimate(phi, float(t_last), True)


def estimate_onestep(y_win: SampleWindow, u_prev: float, alpha: float, nu: int) -> FEstimate:
    """Finite-difference estimate F = y^(nu) - alpha * u_prev.

    nu = 1 uses the backward difference of the two newest samples; nu = 2 the
    second backward difference of the three newest.
    """
    if nu not in (1, 2):
        raise ConfigError(f"derivative order must be 1 or 2, got {nu}")
    needed = nu + 1
    t_last = y_win.times()[-1] if len(y_win) else 0.0
    if len(y_win) < needed:
        return FEstimate(0.0, float(t_last), False)
    t = y_win.times()
    y = y_win.values()
    h = t[-1] - t[-2]
    if nu == 1:
        deriv = (y[-1] - y[-2]) / h
    else:
        deriv = (y[-1] - 2.0 * y[-2] + y[-3]) / h**2
    return FEstimate(float(deriv - alpha * u_prev), float(t[-1]), True)


def _window_capacity(window_len: float, te: float) -> int:
    n = int(round(window_len / te)) + 1
    if n < 3:
        raise ConfigError(f"window_len {window_len} too short for te={te}")
    return n


class OpenLoopEstimator:
    """Stateful wrapper owning the (y, u) windows for the integral estimate.

    nu selects the model order: 1 uses the first-order filter, 2 the
    second-order one.
    """

    def __init__(self, alpha: float, window_len: float, te: float, nu: int = 1):
        if nu not in (1, 2):
            raise ConfigError(f"derivative order must be 1 or 2, got {nu}")
        n = _window_capacity(window_len, te)
        self.alpha = alpha
        self.nu = nu
        self._y = SampleWindow(n)
        self._u = SampleWindow(n)

    def update(self, t: float, y_meas: float, u_prev: float) -> FEstimate:
        self._y.push(t, y_meas)
        self._u.push(t, u_prev)
        if self.nu == 1:
            return estimate_openloop(self._y, self._u, self.alpha)
        return estimate_openloop_second(self._y, self._u, self.alpha)


class ClosedLoopIPEstimator:
    """Stateful wrapper for the loop-closed variant (iP with matching gains)."""

    def __init__(self, alpha: float, kp: float, window_len: float, te: float):
        n = _window_capacity(window_len, te)
        self.alpha = alpha
        self.kp = kp
        self._dystar = SampleWindow(n)
        self._u = SampleWindow(n)
        self._e = SampleWindow(n)

    def update(self, t: float, dystar: float, e: float, u_prev: float) -> FEstimate:
        self._dystar.push(t, dystar)
        self._u.push(t, u_prev)
        self._e.push(t, e)
        return estimate_closedloop_ip(self._dystar, self._u, self._e, self.alpha, self.kp)


class OneStepEstimator:
    """Stateful wrapper for the finite-difference estimate."""

    def __init__(self, alpha: float, nu: int, te: float):
        if nu not in (1, 2):
            raise ConfigError(f"derivative order must be 1 or 2, got {nu}")
        self.alpha = alpha
        self.nu = nu
        self._y = SampleWindow(nu + 1)
        self._u_prev = 0.0

    def update(self, t: float, y_meas: float, u_prev: float) -> FEstimate:
        self._y.push(t, y_meas)
        self._u_prev = u_prev
        return estimate_onestep(self._y, self._u_prev, self.alpha, self.nu)
