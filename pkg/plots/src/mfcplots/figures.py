"""Figure assembly from benchmark record CSVs.

Each scenario becomes one image: a controls panel and an outputs panel
(setpoint dash-dotted black, reference dashed black, one colored output per
controller), plus a delay-trace panel when the records carry an aux column
and a space-time surface when a field dump is present.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import RecordTable, load_scenario_dir

# line colors per controller, following the usual legend convention
DEFAULT_STYLES = {
    "pid": "tab:blue",
    "ip": "tab:red",
    "ipid": "tab:green",
    "ipi": "tab:purple",
    "igpi": "tab:orange",
}


@dataclass
class FigureSpec:
    """What to draw for one scenario."""

    scenario: str
    panels: list[str] = field(default_factory=lambda: ["controls", "outputs"])
    styles: dict[str, str] = field(default_factory=dict)

    def style_for(self, label: str) -> str:
        if label in self.styles:
            return self.styles[label]
        return DEFAULT_STYLES.get(label, "tab:gray")


def spec_for_directory(csv_dir) -> FigureSpec:
    """Derive the panel list from what the scenario directory contains."""
    records, fields = load_scenario_dir(csv_dir)
    panels = ["controls", "outputs"]
    if any(rec.has_aux for rec in records):
        panels.append("delay")
    if fields:
        panels.append("heat_surface")
    return FigureSpec(scenario=Path(csv_dir).name, panels=panels)


def _plot_controls(ax, records: list[RecordTable], spec: FigureSpec) -> None:
    for rec in records:
        color = spec.style_for(rec.label)
        ax.plot(rec["t"], rec["u_cmd"], color=color, lw=1.0, label=rec.label)
        if np.any(rec["u_eff"] != rec["u_cmd"]):
            ax.plot(rec["t"], rec["u_eff"], color=color, lw=0.8, ls=":",
                    label=f"{rec.label} (effective)")
    ax.set_ylabel("control")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)


def _plot_outputs(ax, records: list[RecordTable], spec: FigureSpec) -> None:
    first = records[0]
    ax.plot(first["t"], first["setpoint"], "k-.", lw=1.0, label="setpoint")
    ax.plot(first["t"], first["y_ref"], "k--", lw=1.0, label="reference")
    for rec in records:
        ax.plot(rec["t"], rec["y_true"], color=spec.style_for(rec.label),
                lw=1.1, label=rec.label)
    ax.set_ylabel("output")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)


def _plot_delay(ax, records: list[RecordTable], spec: FigureSpec) -> None:
    for rec in records:
        if rec.has_aux:
            ax.plot(rec["t"], rec["aux"], color=spec.style_for(rec.label), lw=1.0)
    ax.set_ylabel("delay [s]")
    ax.grid(True, alpha=0.3)


def _plot_heat_surface(ax, fig, fields) -> None:
    label, table = next(iter(fields.items()))
    mesh = ax.pcolormesh(table.t, table.x, table.w.T, shading="auto",
                         cmap="inferno")
    fig.colorbar(mesh, ax=ax, label=f"field ({label})")
    ax.set_ylabel("position")


def render(csv_dir, figure_spec: FigureSpec | None = None, out_path=None) -> Path:
    """Render one scenario directory into a multi-panel image.

    Returns the written path. Raises :class:`~mfcplots.schema.SchemaError`
    when a CSV is missing or malformed; the error names the offending column.
    """
    csv_dir = Path(csv_dir)
    if figure_spec is None:
        figure_spec = spec_for_directory(csv_dir)
    records, fields = load_scenario_dir(csv_dir)
    panels = list(figure_spec.panels)
    if out_path is None:
        out_path = csv_dir / f"{figure_spec.scenario}.png"
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)

    fig, axes = plt.subplots(len(panels), 1, figsize=(9, 2.6 * len(panels)),
                             sharex=True, squeeze=False)
    for ax, panel in zip(axes[:, 0], panels):
        if panel == "controls":
            _plot_controls(ax, records, figure_spec)
        elif panel == "outputs":
            _plot_outputs(ax, records, figure_spec)
        elif panel == "delay":
            _plot_delay(ax, records, figure_spec)
        elif panel == "heat_surface":
            _plot_heat_surface(ax, fig, fields)
        else:
            raise ValueError(f"unknown panel: {panel!r}")
    axes[-1, 0].set_xlabel("time [s]")
    fig.suptitle(figure_spec.scenario)
    fig.tight_layout()
    fig.savefig(out_path, dpi=110, metadata={"Software": "mfc-plots"})
    plt.close(fig)
    return out_path
