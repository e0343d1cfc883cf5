"""Figure rendering for scan and grid output (file targets only, Agg backend).

Figures are built on bare :class:`matplotlib.figure.Figure` objects rather
than through ``pyplot``, so rendering touches no global state.
"""

from __future__ import annotations

import os
from typing import Mapping, Sequence

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.colors import TwoSlopeNorm
from matplotlib.figure import Figure

from .wigner import W_BOUND, PhaseSpaceGrid

_STYLE = {"figsize": (5.0, 3.6), "dpi": 150}
# Drop timestamps and version stamps so identical data gives identical files.
_METADATA = {
    ".png": {"Software": None},
    ".pdf": {"Creator": None, "Producer": None, "CreationDate": None},
    ".svg": {"Creator": None, "Date": None},
}

AXIS_LABELS = {
    "alpha_abs": r"$|\alpha|$",
    "gamma": r"$\Gamma$",
    "phi": r"$\varphi$",
    "omega": r"$\omega$",
    "theta": r"$\theta$",
    "delta": r"$\delta$",
}


def _save(fig: Figure, path: str | os.PathLike) -> None:
    FigureCanvasAgg(fig)
    suffix = os.path.splitext(str(path))[1].lower()
    fig.savefig(path, metadata=_METADATA.get(suffix))


def plot_scan(
    series: Mapping[str, tuple[Sequence[float], Sequence[float | None]]],
    axis: str,
    path: str | os.PathLike,
) -> None:
    """One line per labelled series of ``R`` against the scan axis; gaps mark failed points."""
    fig = Figure(figsize=_STYLE["figsize"], dpi=_STYLE["dpi"], layout="constrained")
    ax = fig.add_subplot()
    for label, (x, r) in series.items():
        y = np.array([np.nan if v is None else v for v in r], dtype=float)
        ax.plot(np.asarray(x, dtype=float), y, lw=1.2, label=label)
    ax.axhline(0.0, color="0.5", lw=0.6, ls=":")
    ax.set_xlabel(AXIS_LABELS.get(axis, axis))
    ax.set_ylabel("$R$")
    if len(series) > 1:
        ax.legend(frameon=False, fontsize=8)
    _save(fig, path)


def plot_wigner(grid: PhaseSpaceGrid, path: str | os.PathLike, title: str | None = None) -> None:
    """Diverging colour map centred on zero so negative regions stand out."""
    fig = Figure(figsize=(4.6, 4.0), dpi=_STYLE["dpi"], layout="constrained")
    ax = fig.add_subplot()
    x0, x1, p0, p1 = grid.bounds
    norm = TwoSlopeNorm(vcenter=0.0, vmin=min(grid.values.min(), -1e-3), vmax=max(grid.values.max(), 1e-3))
    img = ax.imshow(grid.values.T, origin="lower", extent=(x0, x1, p0, p1),
                    cmap="RdBu_r", norm=norm, aspect="equal", interpolation="nearest")
    fig.colorbar(img, ax=ax, label="$W(x, p)$", ticks=[-W_BOUND, 0.0, W_BOUND] if grid.values.max() > 0.6 else None)
    ax.set_xlabel("$x$")
    ax.set_ylabel("$p$")
    if title:
        ax.set_title(title, fontsize=9)
    _save(fig, path)
