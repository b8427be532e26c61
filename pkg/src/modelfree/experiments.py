"""Scenario catalog and runners: benchmark closed loops, CSV/JSON emission.

Every catalog entry carries its benchmark parameter values as defaults and
can be re-run deterministically from a seed. Scenarios that compare several
controllers share grid, plant family, reference and noise seed, so output
differences isolate the controller.
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .controllers import ClassicGains, IntelligentGains
from .correspondence import (build_gain_map, sampled_ip, sampled_ipd,
                             sampled_ipi, sampled_ipid, sampled_pi,
                             sampled_pi2, sampled_pi2d, sampled_pid)
from .errors import ConfigError
from .estimation import UltraLocalConfig
from .plants import (DelayPlant, DuffingSpring, FaultSpec, HeatRod,
                     NonlinearCubic, Oscillator, TustinFriction, lti_aging,
                     lti_nominal, lti_nonminimum_phase)
from .signals import NoiseSource, TimeGrid, make_reference
from .simulation import (ClassicController, ClosedLoopRecord, Feedforward,
                         IntelligentController, LoopConfig, Metrics,
                         compute_metrics, run_closed_loop)

DEFAULT_SEED = 1
_TAU_SEED_OFFSET = 7919  # delay-walk stream derived from the scenario seed


@dataclass
class ScenarioSpec:
    """A built scenario: freshly constructed loops plus evaluation settings."""

    name: str
    seed: int
    grid: TimeGrid
    loops: list[LoopConfig]
    eval_window: tuple[float, float]
    band: Optional[float] = None


@dataclass
class ScenarioResult:
    """Artifacts of one scenario run."""

    name: str
    seed: int
    out_dir: Path
    records: dict[str, ClosedLoopRecord]
    metrics: dict[str, Metrics]
    csv_paths: dict[str, Path]
    metrics_path: Optional[Path] = None
    summary_path: Optional[Path] = None
    report: Optional[dict] = None


def _std_grid(p: dict) -> TimeGrid:
    return TimeGrid(te=p["te"], duration=p["duration"])


def _reference(p: dict, grid: TimeGrid):
    # drop setpoint changes past the (possibly shortened) horizon
    setpoints = [sp for sp in p["setpoints"] if sp[0] <= grid.duration]
    return make_reference(setpoints, p["transition"], grid)


def _eval_window(p: dict) -> tuple[float, float]:
    # Skip twice the estimation window (estimator warm-up transient), but
    # never more than half of a short horizon.
    t0 = min(2.0 * p.get("window_len", 0.1), 0.5 * p["duration"])
    return (t0, p["duration"])


def _oscillator_defaults(c: float) -> dict:
    # The hot (16, 25) gain set tolerates only a slow lumped-term estimate on
    # this second-order plant; short windows destabilize the loop.
    return {
        "te": 0.01, "duration": 15.0, "noise_std": 0.03,
        "c": c, "stiffness": 4.0,
        "alpha": 1.0, "kp": 16.0, "ki": 25.0, "window_len": 2.0,
        "setpoints": [(0.0, 0.0), (3.0, 1.0), (8.0, 0.5)], "transition": 1.5,
    }


def _build_oscillator(name: str, seed: int, p: dict) -> ScenarioSpec:
    grid = _std_grid(p)
    ref = _reference(p, grid)
    gains = IntelligentGains(alpha=p["alpha"], kp=p["kp"], ki=p["ki"])
    loop = LoopConfig(
        label="ipi", grid=grid,
        plant=Oscillator(c=p["c"], k=p["stiffness"]),
        controller=IntelligentController("ipi", gains),
        ultra_local=UltraLocalConfig(nu=1, alpha=p["alpha"],
                                     estimator="open-loop-integral",
                                     window_len=p["window_len"]),
        reference=ref, noise=NoiseSource(seed, p["noise_std"]),
    )
    return ScenarioSpec(name, seed, grid, [loop], _eval_window(p))


def _spring_defaults() -> dict:
    return {
        "te": 0.01, "duration": 15.0, "noise_std": 0.01,
        "m": 0.5, "k1": 3.0, "k3": 2.0, "d": 1.0, "k1_hat": 2.0,
        "fc": 0.25, "fs": 0.5, "vs": 0.1,
        "pid_kp": 1.375, "pid_ki": 1.6875, "pid_kd": 2.25,
        "ip_alpha": 1.0, "ip_kp": 1.5,
        "ipid_alpha": 2.0, "window_len": 0.1,
        "setpoints": [(0.0, 0.0), (1.0, 1.0), (8.0, -1.0)], "transition": 1.0,
    }


def _spring_plant(p: dict) -> DuffingSpring:
    return DuffingSpring(m=p["m"], k1=p["k1"], k3=p["k3"], d=p["d"],
                         friction=TustinFriction(fc=p["fc"], fs=p["fs"], vs=p["vs"]))


def _build_spring(name: str, seed: int, p: dict) -> ScenarioSpec:
    grid = _std_grid(p)
    ref = _reference(p, grid)
    noise = NoiseSource(seed, p["noise_std"])
    controller = name.rsplit("-", 1)[-1]
    if controller == "pid":
        loop = LoopConfig(
            label="pid", grid=grid, plant=_spring_plant(p),
            controller=ClassicController("pid", ClassicGains(
                kp=p["pid_kp"], ki=p["pid_ki"], kd=p["pid_kd"],
                deriv_filter_tau=5 * p["te"])),
            reference=ref, noise=noise,
            feedforward=Feedforward(m=p["m"], k1_hat=p["k1_hat"]),
        )
    elif controller == "ipid":
        gains = IntelligentGains(alpha=p["ipid_alpha"], kp=p["pid_kp"],
                                 ki=p["pid_ki"], kd=p["pid_kd"])
        # The second-order integral filter: the one-step second difference
        # turns measurement noise into persistent velocity jitter at the
        # plant input and even loses stability for some noise draws.
        loop = LoopConfig(
            label="ipid", grid=grid, plant=_spring_plant(p),
            controller=IntelligentController("ipid", gains),
            ultra_local=UltraLocalConfig(nu=2, alpha=p["ipid_alpha"],
                                         estimator="open-loop-integral",
                                         window_len=p["window_len"]),
            reference=ref, noise=noise,
        )
    elif controller == "ip":
        gains = IntelligentGains(alpha=p["ip_alpha"], kp=p["ip_kp"])
        loop = LoopConfig(
            label="ip", grid=grid, plant=_spring_plant(p),
            controller=IntelligentController("ip", gains),
            ultra_local=UltraLocalConfig(nu=1, alpha=p["ip_alpha"],
                                         estimator="open-loop-integral",
                                         window_len=p["window_len"]),
            reference=ref, noise=noise,
        )
    else:
        raise ConfigError(f"unknown spring controller: {controller!r}")
    return ScenarioSpec(name, seed, grid, [loop], _eval_window(p))


def _lti_defaults(fault: bool) -> dict:
    p = {
        "te": 0.01, "duration": 20.0, "noise_std": 0.03,
        "pid_kp": 1.8177, "pid_ki": 0.7755, "pid_kd": 0.1766,
        "ip_kp": 1.8177, "alpha": 1.0, "window_len": 0.1,
        "setpoints": [(0.0, 0.0), (1.0, 1.0)], "transition": 3.0,
        "band": 0.05,
    }
    if fault:
        p["fault_time"] = 8.0
        p["fault_gain"] = 0.5
    return p


def _build_lti(name: str, seed: int, p: dict) -> ScenarioSpec:
    grid = _std_grid(p)
    ref = _reference(p, grid)
    plant_factory = lti_aging if name == "lti-aging" else lti_nominal
    fault = None
    if "fault_time" in p:
        fault = FaultSpec(t_fault=p["fault_time"], gain_factor=p["fault_gain"])
    pid = LoopConfig(
        label="pid", grid=grid, plant=plant_factory(),
        controller=ClassicController("pid", ClassicGains(
            kp=p["pid_kp"], ki=p["pid_ki"], kd=p["pid_kd"],
            deriv_filter_tau=5 * p["te"])),
        reference=ref, noise=NoiseSource(seed, p["noise_std"]), fault=fault,
    )
    ip = LoopConfig(
        label="ip", grid=grid, plant=plant_factory(),
        controller=IntelligentController("ip", IntelligentGains(
            alpha=p["alpha"], kp=p["ip_kp"])),
        ultra_local=UltraLocalConfig(nu=1, alpha=p["alpha"],
                                     estimator="open-loop-integral",
                                     window_len=p["window_len"]),
        reference=ref, noise=NoiseSource(seed, p["noise_std"]), fault=fault,
    )
    return ScenarioSpec(name, seed, grid, [pid, ip], _eval_window(p),
                        band=p.get("band"))


def _cubic_defaults() -> dict:
    return {
        "te": 0.01, "duration": 15.0, "noise_std": 0.03,
        "pid_kp": 2.2727, "pid_ki": 1.8769, "pid_kd": 0.1750,
        "ip_kp": 2.2727, "alpha": 1.0, "window_len": 0.1,
        "setpoints": [(0.0, 0.0), (1.0, 1.0), (5.0, 0.1), (10.0, 1.5)],
        "transition": 1.0,
    }


def _build_cubic(name: str, seed: int, p: dict) -> ScenarioSpec:
    grid = _std_grid(p)
    ref = _reference(p, grid)
    pid = LoopConfig(
        label="pid", grid=grid, plant=NonlinearCubic(),
        controller=ClassicController("pid", ClassicGains(
            kp=p["pid_kp"], ki=p["pid_ki"], kd=p["pid_kd"],
            deriv_filter_tau=5 * p["te"])),
        reference=ref, noise=NoiseSource(seed, p["noise_std"]),
    )
    # Integral estimate rather than one-step: the cubic input channel turns
    # differenced measurement noise into huge plant excursions.
    ip = LoopConfig(
        label="ip", grid=grid, plant=NonlinearCubic(),
        controller=IntelligentController("ip", IntelligentGains(
            alpha=p["alpha"], kp=p["ip_kp"])),
        ultra_local=UltraLocalConfig(nu=1, alpha=p["alpha"],
                                     estimator="open-loop-integral",
                                     window_len=p["window_len"]),
        reference=ref, noise=NoiseSource(seed, p["noise_std"]),
    )
    return ScenarioSpec(name, seed, grid, [pid, ip], _eval_window(p))


def _delay_defaults() -> dict:
    return {
        "te": 0.01, "duration": 60.0, "noise_std": 0.03,
        "kp": 1.0, "alpha": 1.0, "tau0": 2.5, "window_len": 0.1,
        "setpoints": [(0.0, 0.0), (2.0, 1.0), (30.0, 2.0)], "transition": 2.0,
    }


def _build_delay(name: str, seed: int, p: dict) -> ScenarioSpec:
    grid = _std_grid(p)
    ref = _reference(p, grid)
    plant = DelayPlant(walk_noise=NoiseSource(seed + _TAU_SEED_OFFSET, 1.0),
                       tau0=p["tau0"])
    loop = LoopConfig(
        label="ip", grid=grid, plant=plant,
        controller=IntelligentController("ip", IntelligentGains(
            alpha=p["alpha"], kp=p["kp"])),
        ultra_local=UltraLocalConfig(nu=1, alpha=p["alpha"],
                                     estimator="open-loop-integral",
                                     window_len=p["window_len"]),
        reference=ref, noise=NoiseSource(seed, p["noise_std"]),
    )
    return ScenarioSpec(name, seed, grid, [loop], _eval_window(p))


_HEAT_CASES = {
    # (probe position, cubic reaction?, cold-end value)
    "heat-1": (1.0 / 3.0, False, 0.0),
    "heat-2": (1.0 / 3.0, False, 0.5),
    "heat-3": (2.0 / 3.0, False, 0.0),
    "heat-4": (2.0 / 3.0, True, 0.0),
}


def _heat_defaults(name: str) -> dict:
    x_c, cubic, c = _HEAT_CASES[name]
    return {
        "te": 0.01, "duration": 15.0, "noise_std": 0.01,
        "alpha": 10.0, "kp": 10.0, "window_len": 0.1,
        "x_c": x_c, "c": c, "cubic_reaction": cubic,
        "length": 1.0, "n_x": 101,
        "setpoints": [(0.0, 1.0), (8.0, 2.0)], "transition": 1.5,
        "field_stride": 10,
    }


def _build_heat(name: str, seed: int, p: dict) -> ScenarioSpec:
    grid = _std_grid(p)
    ref = _reference(p, grid)
    reaction = (lambda w: w**3) if p["cubic_reaction"] else None
    # x_c is stored as a fraction of the rod length.
    plant = HeatRod(x_c=p["x_c"] * p["length"], c=p["c"], f=reaction,
                    length=p["length"], n_x=int(p["n_x"]))
    loop = LoopConfig(
        label="ip", grid=grid, plant=plant,
        controller=IntelligentController("ip", IntelligentGains(
            alpha=p["alpha"], kp=p["kp"])),
        ultra_local=UltraLocalConfig(nu=1, alpha=p["alpha"],
                                     estimator="open-loop-integral",
                                     window_len=p["window_len"]),
        reference=ref, noise=NoiseSource(seed, p["noise_std"]),
        field_stride=int(p["field_stride"]),
    )
    return ScenarioSpec(name, seed, grid, [loop], _eval_window(p))


def _nonminphase_defaults() -> dict:
    return {
        "te": 0.01, "duration": 15.0, "noise_std": 0.03,
        "alpha": 10.0, "beta": -10.0, "kp": 3.0, "ki": 5.0, "kii": 5.0,
        "window_len": 0.1,
        "setpoints": [(0.0, 0.0), (2.0, 1.0)], "transition": 2.0,
    }


def _build_nonminphase(name: str, seed: int, p: dict) -> ScenarioSpec:
    grid = _std_grid(p)
    ref = _reference(p, grid)
    gains = IntelligentGains(alpha=p["alpha"], beta=p["beta"], kp=p["kp"],
                             ki=p["ki"], kii=p["kii"])
    loop = LoopConfig(
        label="igpi", grid=grid, plant=lti_nonminimum_phase(),
        controller=IntelligentController("igpi", gains),
        ultra_local=UltraLocalConfig(nu=1, alpha=p["alpha"], beta=p["beta"],
                                     estimator="open-loop-integral",
                                     window_len=p["window_len"]),
        reference=ref, noise=NoiseSource(seed, p["noise_std"]),
    )
    return ScenarioSpec(name, seed, grid, [loop], _eval_window(p))


_CORRESPONDENCE_DEFAULTS = {
    "h": 0.01, "alpha": 1.0, "n_random": 100, "length": 1000,
}

_CATALOG: dict[str, tuple[Callable[[], dict], Callable[[str, int, dict], ScenarioSpec], str]] = {
    "oscillator-ipi": (lambda: _oscillator_defaults(3.0), _build_oscillator,
                       "damped oscillator with an intelligent PI"),
    "oscillator-undamped": (lambda: _oscillator_defaults(0.0), _build_oscillator,
                            "frictionless oscillator: same design, degraded tracking"),
    "spring-pid": (_spring_defaults, _build_spring,
                   "cubic-hardening spring, classic PID around a flat feedforward"),
    "spring-ipid": (_spring_defaults, _build_spring,
                    "cubic-hardening spring, intelligent PID"),
    "spring-ip": (_spring_defaults, _build_spring,
                  "cubic-hardening spring, intelligent P"),
    "lti-nominal": (lambda: _lti_defaults(False), _build_lti,
                    "third-order plant, PID vs intelligent P"),
    "lti-aging": (lambda: _lti_defaults(False), _build_lti,
                  "same controllers on the pole-drifted plant"),
    "lti-fault": (lambda: _lti_defaults(True), _build_lti,
                  "actuator power loss at t=8s, accommodation comparison"),
    "nonlinear-cubic": (_cubic_defaults, _build_cubic,
                        "unstable plant with cubic input, PID vs intelligent P"),
    "delay-varying": (_delay_defaults, _build_delay,
                      "unstable plant with a randomly wandering delay"),
    "heat-1": (lambda: _heat_defaults("heat-1"), _build_heat,
               "heat rod, probe at L/3, linear, cold end at 0"),
    "heat-2": (lambda: _heat_defaults("heat-2"), _build_heat,
               "heat rod, probe at L/3, linear, cold end at 0.5"),
    "heat-3": (lambda: _heat_defaults("heat-3"), _build_heat,
               "heat rod, probe at 2L/3, linear, cold end at 0"),
    "heat-4": (lambda: _heat_defaults("heat-4"), _build_heat,
               "heat rod, probe at 2L/3, cubic reaction, cold end at 0"),
    "nonminphase-igpi": (_nonminphase_defaults, _build_nonminphase,
                         "single-unstable-zero plant, intelligent generalized PI"),
    "correspondence-check": (lambda: dict(_CORRESPONDENCE_DEFAULTS), None,
                             "sampled classic vs intelligent gain-map identities"),
}


def scenario_names() -> list[str]:
    return list(_CATALOG.keys())


def catalog_defaults(name: str) -> dict:
    """Default parameter set of a catalog entry (a fresh copy)."""
    if name not in _CATALOG:
        raise ConfigError(f"unknown scenario: {name!r}")
    return _CATALOG[name][0]()


def list_scenarios() -> str:
    lines = ["available scenarios:"]
    for name, (_, _, desc) in _CATALOG.items():
        lines.append(f"  {name:22s} {desc}")
    return "\n".join(lines)


def parse_overrides(pairs: list[str]) -> dict:
    """Parse CLI ``key=value`` strings; values go through literal_eval."""
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"override must look like key=value, got {pair!r}")
        key, raw = pair.split("=", 1)
        try:
            out[key.strip()] = ast.literal_eval(raw)
        except (ValueError, SyntaxError):
            out[key.strip()] = raw
    return out


def _apply_overrides(defaults: dict, overrides: dict | None) -> dict:
    p = dict(defaults)
    for key, value in (overrides or {}).items():
        if key == "seed":
            continue  # handled by the caller
        if key not in p:
            raise ConfigError(f"unknown override key: {key!r}")
        p[key] = value
    return p


def build_scenario(name: str, seed: int = DEFAULT_SEED,
                   overrides: dict | None = None) -> ScenarioSpec:
    """Construct fresh loop configs for one catalog scenario."""
    if name not in _CATALOG:
        raise ConfigError(f"unknown scenario: {name!r}")
    if name == "correspondence-check":
        raise ConfigError("correspondence-check has no closed loops; use run_scenario")
    defaults, builder, _ = _CATALOG[name]
    p = _apply_overrides(defaults(), overrides)
    return builder(name, seed, p)


def verify_correspondence(h: float = 0.01, alpha: float = 1.0,
                          gains: dict | None = None, n_random: int = 100,
                          length: int = 1000, seed: int = 0) -> dict:
    """Exercise all four gain-map rows on random error sequences.

    Returns per-direction maximum absolute and relative control deviations;
    the relative deviation normalizes by the largest |u| in the batch.
    """
    if n_random < 1:
        raise ConfigError("n_random must be >= 1")
    if length < 3:
        raise ConfigError("sequences must have length >= 3")
    g = {"kp": 1.8177, "ki": 1.6875, "kd": 2.25}
    g.update(gains or {})
    rng = np.random.default_rng(seed)

    rows = {
        "iP->PI": (
            build_gain_map("iP->PI", alpha, h, kp=g["kp"]),
            lambda e, m: sampled_ip(e, h, alpha, kp=m.source["kp"]),
            lambda e, m: sampled_pi(e, h, **m.mapped),
        ),
        "iPD->PID": (
            build_gain_map("iPD->PID", alpha, h, kp=g["kp"], kd=g["kd"]),
            lambda e, m: sampled_ipd(e, h, alpha, kp=m.source["kp"], kd=m.source["kd"]),
            lambda e, m: sampled_pid(e, h, **m.mapped),
        ),
        "iPI->PI2": (
            build_gain_map("iPI->PI2", alpha, h, kp=g["kp"], ki=g["ki"]),
            lambda e, m: sampled_ipi(e, h, alpha, kp=m.source["kp"], ki=m.source["ki"]),
            lambda e, m: sampled_pi2(e, h, **m.mapped),
        ),
        "iPID->PI2D": (
            build_gain_map("iPID->PI2D", alpha, h, kp=g["kp"], ki=g["ki"], kd=g["kd"]),
            lambda e, m: sampled_ipid(e, h, alpha, kp=m.source["kp"],
                                      ki=m.source["ki"], kd=m.source["kd"]),
            lambda e, m: sampled_pi2d(e, h, **m.mapped),
        ),
    }

    report: dict = {"h": h, "alpha": alpha, "n_random": n_random,
                    "length": length, "seed": seed, "rows": {}}
    chunk = max(1, 1_000_000 // length)
    overall = 0.0
    for direction, (gmap, run_int, run_classic) in rows.items():
        max_abs = 0.0
        max_rel = 0.0
        remaining = n_random
        while remaining > 0:
            m = min(chunk, remaining)
            e = rng.standard_normal((m, length))
            u_int = run_int(e, gmap)
            u_cls = run_classic(e, gmap)
            dev = float(np.max(np.abs(u_int - u_cls)))
            scale = float(max(np.max(np.abs(u_int)), 1.0))
            max_abs = max(max_abs, dev)
            max_rel = max(max_rel, dev / scale)
            remaining -= m
        report["rows"][direction] = {
            "mapped_gains": gmap.mapped,
            "max_abs_deviation": max_abs,
            "max_rel_deviation": max_rel,
        }
        overall = max(overall, max_rel)
    report["max_rel_deviation"] = overall
    return report


def _write_metrics_json(path: Path, spec: ScenarioSpec,
                        metrics: dict[str, Metrics]) -> None:
    payload = {
        "scenario": spec.name,
        "seed": spec.seed,
        "duration": spec.grid.duration,
        "controllers": {label: m.as_dict() for label, m in metrics.items()},
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _write_summary(path: Path, spec: ScenarioSpec,
                   metrics: dict[str, Metrics]) -> None:
    lines = [f"scenario: {spec.name} (seed {spec.seed})"]
    for label, m in metrics.items():
        extra = "" if m.recovery_time is None else f", recovery={m.recovery_time:.2f}s"
        lines.append(f"  {label:6s} rms={m.rms_error:.5f} iae={m.iae:.5f} "
                     f"max={m.max_abs_error:.5f} effort={m.control_effort:.3f}{extra}")
    labels = list(metrics.keys())
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            rb = metrics[b].rms_error
            ratio = metrics[a].rms_error / rb if rb > 0 else float("inf")
            lines.append(f"  rms({a})/rms({b}) = {ratio:.3f}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def run_scenario(name: str, seed: int = DEFAULT_SEED, out_dir="runs",
                 overrides: dict | None = None) -> ScenarioResult:
    """Run one catalog scenario and write CSV records, metrics and a summary."""
    if name not in _CATALOG:
        raise ConfigError(f"unknown scenario: {name!r}")
    out = Path(out_dir) / name
    out.mkdir(parents=True, exist_ok=True)

    if name == "correspondence-check":
        p = _apply_overrides(_CATALOG[name][0](), overrides)
        report = verify_correspondence(h=p["h"], alpha=p["alpha"],
                                       n_random=int(p["n_random"]),
                                       length=int(p["length"]), seed=seed)
        report_path = out / "report.json"
        report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                               encoding="utf-8")
        summary = out / "summary.txt"
        lines = [f"scenario: {name} (seed {seed})"]
        for direction, row in report["rows"].items():
            lines.append(f"  {direction:12s} max|du| = {row['max_abs_deviation']:.3e} "
                         f"(relative {row['max_rel_deviation']:.3e})")
        summary.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return ScenarioResult(name, seed, out, {}, {}, {}, metrics_path=report_path,
                              summary_path=summary, report=report)

    spec = build_scenario(name, seed=seed, overrides=overrides)
    records: dict[str, ClosedLoopRecord] = {}
    metrics: dict[str, Metrics] = {}
    csv_paths: dict[str, Path] = {}
    for loop in spec.loops:
        rec = run_closed_loop(loop)
        records[loop.label] = rec
        metrics[loop.label] = compute_metrics(rec, spec.eval_window, band=spec.band)
        csv_path = out / f"{loop.label}.csv"
        rec.write_csv(csv_path)
        csv_paths[loop.label] = csv_path
        if rec.field_w is not None:
            rec.write_field_csv(out / f"{loop.label}_field.csv")
    metrics_path = out / "metrics.json"
    _write_metrics_json(metrics_path, spec, metrics)
    summary_path = out / "summary.txt"
    _write_summary(summary_path, spec, metrics)
    return ScenarioResult(name, seed, out, records, metrics, csv_paths,
                          metrics_path=metrics_path, summary_path=summary_path)
