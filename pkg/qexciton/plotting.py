"""
SVG line plots of scenario curves.
"""

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
from matplotlib.figure import Figure  # noqa: E402

import numpy as np  # noqa: E402

# Fixed hash salt so element ids, and therefore the files, are reproducible.
matplotlib.rcParams["svg.hashsalt"] = "qexciton"


def write_svg(path: Path, grid: np.ndarray, values: np.ndarray, label: str, title: str = "") -> None:
    """Write one curve as an SVG polyline plot (energy axis in eV)."""
    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.subplots()
    ax.plot(grid, values, linewidth=1.0)
    ax.set_xlabel("omega (eV)")
    ax.set_ylabel(label)
    if title:
        ax.set_title(title)
    ax.ticklabel_format(axis="x", useOffset=False)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
