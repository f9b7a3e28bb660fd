"""Figure builders: trajectory panel pairs and log-log sweep grids.

Colors follow the simulator's reporting convention: blue electronic, red
cavity, green bright mode (x10), black dark modes (x100).  Axes are ps and
cm^-1.  Rendering is deterministic for identical inputs (fixed svg hash salt,
no embedded dates).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "plotfig"

import matplotlib.pyplot as plt
import numpy as np

from .io import read_sweep, read_trajectory

FS_PER_PS = 1000.0

_SAVEFIG_METADATA = {
    ".png": {"Software": "plotfig"},
    ".svg": {"Date": None},
}


@dataclass
class PanelSpec:
    """One sweep panel: its CSV, axis label, and optional dashed asymptote
    (power-law exponent anchored at one data row)."""

    path: str
    label: str = ""
    asymptote_exponent: float | None = None
    anchor_index: int = 0
    detune_about: float | None = None   # symmetric-log x about this reference


@dataclass
class FigureSpec:
    kind: str                      # trajectory-panels | sweep-grid | relaxation-grid
    inputs: list = field(default_factory=list)   # paths or PanelSpec entries
    output: str = "figure.png"
    bright_amplification: float = 10.0
    dark_amplification: float = 100.0


def _save(fig, output):
    suffix = "." + output.rsplit(".", 1)[-1].lower() if "." in output else ".png"
    fig.savefig(output, dpi=150, metadata=_SAVEFIG_METADATA.get(suffix))
    plt.close(fig)


def plot_trajectory(spec: FigureSpec):
    """Two-panel trajectory figure: excited-state population on the left,
    component energies (bright/dark amplified) on the right.

    Returns (output path, curves dict) so callers can check the plotted data.
    """
    cols = read_trajectory(spec.inputs[0])
    t_ps = cols["t_fs"] / FS_PER_PS

    fig, (ax_pop, ax_energy) = plt.subplots(1, 2, figsize=(9.0, 3.4))
    ax_pop.plot(t_ps, cols["P_e"], color="tab:blue", lw=0.8)
    ax_pop.set_xlabel("time (ps)")
    ax_pop.set_ylabel(r"$P_\mathrm{e}$")

    curves = {
        "E_e": cols["E_e_cm1"],
        "E_c": cols["E_c_cm1"],
        "E_B_amplified": spec.bright_amplification * cols["E_B_cm1"],
        "E_D_amplified": spec.dark_amplification * cols["E_D_cm1"],
    }
    ax_energy.plot(t_ps, curves["E_e"], color="blue", lw=0.8, label="electronic")
    ax_energy.plot(t_ps, curves["E_c"], color="red", lw=0.8, label="cavity")
    ax_energy.plot(t_ps, curves["E_B_amplified"], color="green", lw=0.8,
                   label=f"bright x{spec.bright_amplification:g}")
    ax_energy.plot(t_ps, curves["E_D_amplified"], color="black", lw=0.8,
                   label=f"dark x{spec.dark_amplification:g}")
    ax_energy.set_xlabel("time (ps)")
    ax_energy.set_ylabel(r"energy (cm$^{-1}$)")
    ax_energy.legend(fontsize=7, frameon=False)

    fig.tight_layout()
    _save(fig, spec.output)
    return spec.output, curves


def _panel(ax, panel: PanelSpec):
    """One log-log scatter with an optional dashed asymptote; returns the
    number of dropped (non-positive) points."""
    data = read_sweep(panel.path)
    x = data["param_value"].astype(float)
    y = data["E_D_5ps_cm1"].astype(float)
    ok = np.array([s == "ok" for s in data["status"]])

    if panel.detune_about is not None:
        x = x - panel.detune_about
        keep = ok & np.isfinite(y) & (y > 0.0)
        dropped = int(np.sum(~keep))
        ax.plot(x[keep], y[keep], "o", mfc="none", color="tab:blue", ms=5)
        ax.set_xscale("symlog", linthresh=max(1e-12, np.min(np.abs(x[x != 0]), initial=1e-12)))
        ax.set_yscale("log")
    else:
        keep = ok & np.isfinite(y) & (y > 0.0) & (x > 0.0)
        dropped = int(np.sum(~keep))
        ax.plot(x[keep], y[keep], "o", mfc="none", color="tab:blue", ms=5)
        ax.set_xscale("log")
        ax.set_yscale("log")
        if panel.asymptote_exponent is not None and np.any(keep):
            xs = x[keep]
            ys = y[keep]
            anchor = min(panel.anchor_index, len(xs) - 1)
            grid = np.geomspace(xs.min(), xs.max(), 64)
            ref = ys[anchor] * (grid / xs[anchor]) ** panel.asymptote_exponent
            ax.plot(grid, ref, "--", color="tab:blue", lw=1.0)
    if dropped:
        warnings.warn(f"{panel.path}: dropped {dropped} non-plottable points", stacklevel=2)
    ax.set_xlabel(panel.label or "parameter")
    ax.set_ylabel(r"$E_\mathrm{D}$ (cm$^{-1}$)")
    return dropped


def plot_sweep_grid(spec: FigureSpec):
    """Up to six log-log sweep panels with dashed power-law asymptotes.

    Returns (output path, total dropped-point count).
    """
    panels = [p if isinstance(p, PanelSpec) else PanelSpec(path=p) for p in spec.inputs]
    if not 1 <= len(panels) <= 6:
        raise ValueError(f"sweep grid takes 1-6 panels (got {len(panels)})")
    ncols = min(3, len(panels))
    nrows = (len(panels) + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(3.2 * ncols, 2.8 * nrows),
                             squeeze=False)
    dropped = 0
    for ax, panel in zip(axes.flat, panels):
        dropped += _panel(ax, panel)
    for ax in axes.flat[len(panels):]:
        ax.set_axis_off()
    fig.tight_layout()
    _save(fig, spec.output)
    return spec.output, dropped


def plot_relaxation_grid(spec: FigureSpec):
    """Relaxation-rate robustness panels; same renderer as the sweep grid,
    capped at three panels."""
    if not 1 <= len(spec.inputs) <= 3:
        raise ValueError(f"relaxation grid takes 1-3 panels (got {len(spec.inputs)})")
    return plot_sweep_grid(spec)
