"""Per-sample control laws: intelligent (F-cancelling) and classic PID families.

The intelligent laws all share the minus convention

    u = -(F - y*^(nu) + <error feedback>) / alpha

so that substituting u back into y^(nu) = F + alpha*u cancels F identically
and leaves linear error dynamics driven only by the tuning gains.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class IntelligentGains:
    """Tracking gains and ultra-local gains for the intelligent laws.

    Unused gains stay at their 0 default (an iP has ki = kd = kii = 0).
    """

    alpha: float
    kp: float = 0.0
    ki: float = 0.0
    kd: float = 0.0
    kii: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.alpha == 0:
            raise ConfigError("alpha must be nonzero")


@dataclass(frozen=True)
class ClassicGains:
    """Classic PID / PI2D gains; deriv_filter_tau = 0 means unfiltered."""

    kp: float = 0.0
    ki: float = 0.0
    kd: float = 0.0
    kii: float = 0.0
    deriv_filter_tau: float = 0.0

    def __post_init__(self):
        if self.deriv_filter_tau < 0:
            raise ConfigError("deriv_filter_tau must be >= 0")


@dataclass
class ControllerState:
    """Accumulators and derivative-filter memory, advanced once per sample."""

    int_e: float = 0.0
    int_int_e: float = 0.0
    int_u: float = 0.0
    prev_e: float = 0.0
    prev_filtered_de: float = 0.0

    def accumulate_error(self, e: float, te: float) -> None:
        # Rectangle rule including the current sample, matching the sampled
        # recursion I(t) = I(t-h) + h*e(t) used by the discrete equivalences.
        self.int_e += e * te
        self.int_int_e += self.int_e * te

    def accumulate_control(self, u: float, te: float) -> None:
        self.int_u += u * te

    def filtered_derivative(self, e: float, te: float, tau: float) -> float:
        raw = (e - self.prev_e) / te
        if tau <= 0.0:
            de = raw
        else:
            de = self.prev_filtered_de + (te / (tau + te)) * (raw - self.prev_filtered_de)
        self.prev_e = e
        self.prev_filtered_de = de
        return de


def ip(f_est: float, dystar: float, e: float, g: IntelligentGains) -> float:
    """Intelligent proportional law: u = -(F - dy* + Kp*e)/alpha."""
    return -(f_est - dystar + g.kp * e) / g.alpha


def ipi(f_est: float, dystar: float, e: float, int_e: float, g: IntelligentGains) -> float:
    """Intelligent PI law: adds Ki * integral of e to the iP bracket."""
    return -(f_est - dystar + g.kp * e + g.ki * int_e) / g.alpha


def ipd(f_est: float, ddystar: float, e: float, de: float, g: IntelligentGains) -> float:
    """Intelligent PD law (second-order model): u = -(F - ddy* + Kp*e + Kd*de)/alpha."""
    return -(f_est - ddystar + g.kp * e + g.kd * de) / g.alpha


def ipid(f_est: float, ddystar: float, e: float, de: float, int_e: float,
         g: IntelligentGains) -> float:
    """Intelligent PID law: iPD plus Ki * integral of e."""
    return -(f_est - ddystar + g.kp * e + g.kd * de + g.ki * int_e) / g.alpha


def igpi(f_est: float, dystar: float, e: float, int_e: float, int_int_e: float,
         int_u: float, g: IntelligentGains) -> float:
    """Intelligent generalized PI law for the model dy/dt = F + alpha*u + beta*int(u).

    u = -(F + beta*int_u - dy* + Kp*e + Ki*int_e + Kii*int_int_e) / alpha is the
    unique control making the closed loop satisfy
    de/dt + Kp*e + Ki*int_e + Kii*int_int_e = 0.
    """
    return -(f_est + g.beta * int_u - dystar + g.kp * e + g.ki * int_e
             + g.kii * int_int_e) / g.alpha


def classic_pid(e: float, state: ControllerState, g: ClassicGains, te: float) -> float:
    """Classic PID: u = kp*e + ki*int(e) + kd*filtered(de/dt).

    Advances the state (accumulator and derivative filter) exactly once.
    """
    state.accumulate_error(e, te)
    de = state.filtered_derivative(e, te, g.deriv_filter_tau)
    return g.kp * e + g.ki * state.int_e + g.kd * de


def classic_pi2d(e: float, state: ControllerState, g: ClassicGains, te: float) -> float:
    """Classic PI2D: PID plus a double-integral term kii * int(int(e))."""
    state.accumulate_error(e, te)
    de = state.filtered_derivative(e, te, g.deriv_filter_tau)
    return (g.kp * e + g.ki * state.int_e + g.kii * state.int_int_e + g.kd * de)


@dataclass(frozen=True)
class StabilityReport:
    """Closed error dynamics polynomial and its Hurwitz verdict."""

    coefficients: tuple[float, ...]
    roots: tuple[complex, ...]
    hurwitz: bool


def validate_error_dynamics(g: IntelligentGains, nu: int) -> StabilityReport:
    """Check that the closed error dynamics imposed by the gains are stable.

    For nu = 1 the characteristic polynomial is s^2 + Kp*s + Ki (s + Kp for an
    iP, one more order with Kii for the generalized PI); for nu = 2 it is
    s^3 + Kd*s^2 + Kp*s + Ki. All roots must lie strictly in the open left
    half plane.
    """
    if nu not in (1, 2):
        raise ConfigError(f"derivative order must be 1 or 2, got {nu}")
    if nu == 1:
        coeffs = [1.0, g.kp, g.ki, g.kii]
    else:
        coeffs = [1.0, g.kd, g.kp, g.ki]
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs.pop()
    if len(coeffs) == 1:
        return StabilityReport((1.0,), (), False)
    roots = tuple(np.roots(coeffs))
    hurwitz = all(r.real < 0 for r in roots)
    return StabilityReport(tuple(coeffs), roots, hurwitz)
