"""Figure rendering for experiment outputs.

Matplotlib with the Agg backend; SVG output carries no timestamp and uses a
fixed hash salt so identical runs produce identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import SurfaceResult

matplotlib.rcParams["svg.hashsalt"] = "qwass"

_SVG_METADATA = {"Date": None}


def surface_heatmap(result: SurfaceResult, path) -> None:
    """Linear-colormap heatmap of the gap surface; missing points stay blank."""
    nx = len(result.grid_x)
    ny = len(result.grid_y)
    grid = np.full((ny, nx), np.nan)
    for p in result.points:
        ix = int(np.argmin(np.abs(np.asarray(result.grid_x) - p.x)))
        iy = int(np.argmin(np.abs(np.asarray(result.grid_y) - p.y)))
        if p.gap is not None:
            grid[iy, ix] = p.gap
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    mesh = ax.pcolormesh(result.grid_x, result.grid_y, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="gap")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"triangle-inequality gap ({result.scenario})")
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, metadata=_SVG_METADATA if str(path).endswith(".svg") else None)
    plt.close(fig)


def gap_histogram(gaps, path, title: str) -> None:
    """Histogram of triangle-inequality gaps with the minimum marked."""
    gaps = np.asarray(list(gaps), dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.hist(gaps, bins=min(60, max(10, gaps.size // 20)), color="#39568c")
    ax.axvline(float(gaps.min()), color="#d1495b", linestyle="--", label=f"min = {gaps.min():.6f}")
    ax.set_xlabel("gap")
    ax.set_ylabel("count")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata=_SVG_METADATA if str(path).endswith(".svg") else None)
    plt.close(fig)
