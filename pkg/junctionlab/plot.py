"""SVG overlays of IV and T1 curves."""

import logging
from collections.abc import Sequence
from pathlib import Path

import matplotlib as mpl

mpl.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

logger = logging.getLogger(__name__)

# No timestamp and a fixed id salt, so reruns produce identical files
SVG_METADATA = {"Date": None}
mpl.rcParams["svg.hashsalt"] = "junctionlab"


def write_svg(
    path: Path,
    curves: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    xlabel: str,
    ylabel: str,
    title: str = "",
    *,
    log_y: bool = False,
) -> None:
    """Plot one or more (label, x, y) curves on shared axes and save them as SVG."""
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        for label, x, y in curves:
            ax.plot(x, y, label=label or None, linewidth=1.2)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if log_y:
            ax.set_yscale("log")
        if title:
            ax.set_title(title)
        if any(label for label, _, _ in curves):
            ax.legend()
        ax.grid(visible=True, alpha=0.3)
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata=SVG_METADATA)
    finally:
        plt.close(fig)
    logger.debug("Wrote plot %s", path)
