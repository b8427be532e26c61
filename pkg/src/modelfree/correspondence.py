"""Sampled classic and intelligent controllers and the exact gain maps between them.

Both families become incremental recursions once sampled with period h
(velocity form, derivatives as backward differences with zero initial
memory, integrals as running Riemann sums I(t) = I(t-h) + h*e(t)):

    PI:    u(t) = u(t-h) + kp*(e(t) - e(t-h)) + ki*h*e(t)
    iP:    u(t) = u(t-h) - (e(t) - e(t-h))/(h*alpha) + (Kp/alpha)*e(t)

and identically for the PID/iPD, PI2/iPI and PI2D/iPID pairs. Each pair
produces the same control sequence for every error sequence when the gains
are mapped by

    kp <- -1/(alpha*h)   [PI, PI2]      kp <- Kd/(alpha*h)   [PID, PI2D]
    ki <- Kp/(alpha*h)                  ki <- Kp/(alpha*h)
    kii <- Ki/(alpha*h)  [PI2, PI2D]    kd <- -1/(alpha*h)   [PID, PI2D]

The identity is a sampled-time artifact: it degenerates as h -> 0, where the
mapped |kp| grows without bound. The sampled intelligent forms here use the
plus-Kp convention of the incremental rewriting; the continuous-time laws in
:mod:`modelfree.controllers` keep their own minus convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

DIRECTIONS = ("iP->PI", "iPD->PID", "iPI->PI2", "iPID->PI2D")


@dataclass(frozen=True)
class GainMap:
    """One gain correspondence: source intelligent gains -> classic gains."""

    direction: str
    h: float
    alpha: float
    source: dict[str, float]
    mapped: dict[str, float]


def _ah(alpha: float, h: float) -> float:
    ah = alpha * h
    if ah == 0:
        raise ConfigError("alpha*h must be nonzero")
    return ah


def map_ip_to_pi(alpha: float, h: float, kp: float) -> tuple[float, float]:
    """(kp, ki) of the PI identical to the sampled iP."""
    ah = _ah(alpha, h)
    return (-1.0 / ah, kp / ah)


def map_ipd_to_pid(alpha: float, h: float, kp: float, kd: float) -> tuple[float, float, float]:
    """(kp, ki, kd) of the PID identical to the sampled iPD."""
    ah = _ah(alpha, h)
    return (kd / ah, kp / ah, -1.0 / ah)


def map_ipi_to_pi2(alpha: float, h: float, kp: float, ki: float) -> tuple[float, float, float]:
    """(kp, ki, kii) of the PI2 identical to the sampled iPI."""
    ah = _ah(alpha, h)
    return (-1.0 / ah, kp / ah, ki / ah)


def map_ipid_to_pi2d(alpha: float, h: float, kp: float, ki: float,
                     kd: float) -> tuple[float, float, float, float]:
    """(kp, ki, kii, kd) of the PI2D identical to the sampled iPID."""
    ah = _ah(alpha, h)
    return (kd / ah, kp / ah, ki / ah, -1.0 / ah)


def build_gain_map(direction: str, alpha: float, h: float, **source: float) -> GainMap:
    """Assemble a :class:`GainMap` for one of the four supported directions."""
    if direction == "iP->PI":
        kp, ki = map_ip_to_pi(alpha, h, source["kp"])
        mapped = {"kp": kp, "ki": ki}
    elif direction == "iPD->PID":
        kp, ki, kd = map_ipd_to_pid(alpha, h, source["kp"], source["kd"])
        mapped = {"kp": kp, "ki": ki, "kd": kd}
    elif direction == "iPI->PI2":
        kp, ki, kii = map_ipi_to_pi2(alpha, h, source["kp"], source["ki"])
        mapped = {"kp": kp, "ki": ki, "kii": kii}
    elif direction == "iPID->PI2D":
        kp, ki, kii, kd = map_ipid_to_pi2d(alpha, h, source["kp"], source["ki"],
                                           source["kd"])
        mapped = {"kp": kp, "ki": ki, "kii": kii, "kd": kd}
    else:
        raise ConfigError(f"unknown correspondence direction: {direction!r}")
    return GainMap(direction, h, alpha, dict(source), mapped)


def _as_seq(e) -> np.ndarray:
    e = np.asarray(e, dtype=float)
    if e.ndim == 0:
        raise ConfigError("error sequence must be at least 1-D")
    return e


def _delta(e: np.ndarray) -> np.ndarray:
    """e(t) - e(t-h) with zero initial memory."""
    d = np.empty_like(e)
    d[..., 0] = e[..., 0]
    d[..., 1:] = e[..., 1:] - e[..., :-1]
    return d


def _delta2(e: np.ndarray) -> np.ndarray:
    """e(t) - 2e(t-h) + e(t-2h) with zero initial memory."""
    d = np.empty_like(e)
    d[..., 0] = e[..., 0]
    if e.shape[-1] > 1:
        d[..., 1] = e[..., 1] - 2.0 * e[..., 0]
    if e.shape[-1] > 2:
        d[..., 2:] = e[..., 2:] - 2.0 * e[..., 1:-1] + e[..., :-2]
    return d


def _riemann(e: np.ndarray, h: float) -> np.ndarray:
    """Running sum I(t) = I(t-h) + h*e(t)."""
    return h * np.cumsum(e, axis=-1)


def sampled_pi(e_seq, h: float, kp: float, ki: float) -> np.ndarray:
    e = _as_seq(e_seq)
    inc = kp * _delta(e) + ki * h * e
    return np.cumsum(inc, axis=-1)


def sampled_ip(e_seq, h: float, alpha: float, kp: float) -> np.ndarray:
    e = _as_seq(e_seq)
    inc = -_delta(e) / (h * alpha) + (kp / alpha) * e
    return np.cumsum(inc, axis=-1)


def sampled_pid(e_seq, h: float, kp: float, ki: float, kd: float) -> np.ndarray:
    e = _as_seq(e_seq)
    de = _delta(e) / h
    dde = _delta2(e) / h**2
    inc = kp * h * de + ki * h * e + kd * h * dde
    return np.cumsum(inc, axis=-1)


def sampled_ipd(e_seq, h: float, alpha: float, kp: float, kd: float) -> np.ndarray:
    e = _as_seq(e_seq)
    de = _delta(e) / h
    dde = _delta2(e) / h**2
    inc = -dde / alpha + (kp / alpha) * e + (kd / alpha) * de
    return np.cumsum(inc, axis=-1)


def sampled_pi2(e_seq, h: float, kp: float, ki: float, kii: float) -> np.ndarray:
    e = _as_seq(e_seq)
    inc = kp * _delta(e) + ki * h * e + kii * h * _riemann(e, h)
    return np.cumsum(inc, axis=-1)


def sampled_ipi(e_seq, h: float, alpha: float, kp: float, ki: float) -> np.ndarray:
    e = _as_seq(e_seq)
    inc = -_delta(e) / (h * alpha) + (kp / alpha) * e + (ki / alpha) * _riemann(e, h)
    return np.cumsum(inc, axis=-1)


def sampled_pi2d(e_seq, h: float, kp: float, ki: float, kii: float,
                 kd: float) -> np.ndarray:
    e = _as_seq(e_seq)
    de = _delta(e) / h
    dde = _delta2(e) / h**2
    inc = kp * h * de + ki * h * e + kii * h * _riemann(e, h) + kd * h * dde
    return np.cumsum(inc, axis=-1)


def sampled_ipid(e_seq, h: float, alpha: float, kp: float, ki: float,
                 kd: float) -> np.ndarray:
    e = _as_seq(e_seq)
    de = _delta(e) / h
    dde = _delta2(e) / h**2
    inc = (-dde / alpha + (kp / alpha) * e + (ki / alpha) * _riemann(e, h)
           + (kd / alpha) * de)
    return np.cumsum(inc, axis=-1)
