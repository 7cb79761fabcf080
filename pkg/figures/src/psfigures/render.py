"""Phase-space heatmaps and observable time-series plots."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .runs import load_observables, load_particles_at, load_rep_frame

# red = positive, blue = negative, exactly centered at zero
CMAP = "seismic"
DOT_COLOR = "darkblue"


def render_phase_space(run_dir, frame_index: int, out_path, dots_run=None, dpi=150) -> dict:
    """Render one Wigner-representation frame as a heatmap.

    The color scale is symmetric about zero; a zero field renders as a
    uniform mid-scale panel.  When dots_run points at an ensemble run,
    its particles at the nearest dumped time are overlaid.
    """
    rep, sidecar = load_rep_frame(run_dir, frame_index)
    grid = sidecar["grid"]
    extent = [grid["x_min"], grid["x_max"], grid["p_min"], grid["p_max"]]
    vmax = float(np.max(np.abs(rep)))
    if vmax == 0.0:
        vmax = 1.0

    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.imshow(
        rep.T,
        origin="lower",
        extent=extent,
        aspect="auto",
        cmap=CMAP,
        vmin=-vmax,
        vmax=vmax,
        interpolation="nearest",
    )
    n_dots = 0
    if dots_run is not None:
        pts = load_particles_at(dots_run, sidecar["time"])
        ax.scatter(pts[:, 0], pts[:, 1], s=1.5, c=DOT_COLOR, linewidths=0)
        n_dots = len(pts)
    ax.set_xlabel("x")
    ax.set_ylabel("p")
    ax.set_title(f"t = {sidecar['time']:g}")
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)
    return {
        "out": str(out_path),
        "time": sidecar["time"],
        "step": sidecar["step"],
        "vmin": -vmax,
        "vmax": vmax,
        "dots": n_dots,
    }


def render_observables(run_dirs, out_path, dpi=150) -> dict:
    """Two-panel overlay of <x>(t) and the antiparticle diagnostics."""
    if not run_dirs:
        raise ValueError("need at least one run directory")
    fig, (ax_x, ax_f) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
    for run_dir in run_dirs:
        label = Path(run_dir).name
        obs = load_observables(run_dir)
        ax_x.plot(obs["time"], obs["mean_x"], label=label)
        ax_f.plot(obs["time"], obs["antiparticle_fraction"], label=label)
        if "antiparallel_fraction" in obs:
            ax_f.plot(
                obs["time"],
                obs["antiparallel_fraction"],
                linestyle="--",
                label=f"{label} (antiparallel)",
            )
    ax_x.set_ylabel("mean x")
    ax_x.legend(fontsize=8)
    ax_f.set_ylabel("antiparticle fraction")
    ax_f.set_xlabel("time")
    ax_f.legend(fontsize=8)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)
    return {"out": str(out_path), "runs": [str(r) for r in run_dirs]}
