"""Optional SVG scatter plots of strategy sequences (needs the `plot` extra)."""

import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

logger = logging.getLogger(__name__)

SVG_HASH_SALT = "altgda"


class PointSeries(BaseModel):
    """One labelled point sequence of a scatter plot."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    label: str
    points: np.ndarray
    """Shape (N, 2)."""

    marker: str = "o"
    connect: bool = False
    """Draw a line through consecutive points."""


class LevelSet(BaseModel):
    """An axis-aligned ellipse x₁²/a² + x₂²/b² = 1 drawn for reference."""

    label: str
    a: float
    b: float


def _pyplot():
    try:
        import matplotlib
    except ImportError:
        return None
    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = SVG_HASH_SALT
    import matplotlib.pyplot as plt

    return plt


def svg_available() -> bool:
    return _pyplot() is not None


def write_scatter_svg(
    path: Path,
    series: Sequence[PointSeries],
    title: str = "",
    level_sets: Sequence[LevelSet] = (),
    axis_labels: tuple[str, str] = ("x1", "x2"),
) -> Optional[Path]:
    """
    Render a deterministic SVG scatter of the given point series.

    Returns:
        The written path, or None when matplotlib is not installed
    """
    plt = _pyplot()
    if plt is None:
        logger.warning(f"matplotlib not installed; skipping SVG {path.name}")
        return None

    fig, ax = plt.subplots(figsize=(5, 5))
    try:
        angles = np.linspace(0.0, 2.0 * np.pi, 361)
        for level in level_sets:
            ax.plot(level.a * np.cos(angles), level.b * np.sin(angles), "k--", lw=0.8, label=level.label)
        for s in series:
            pts = np.asarray(s.points, dtype=np.float64).reshape(-1, 2)
            if s.connect:
                ax.plot(pts[:, 0], pts[:, 1], lw=0.6, alpha=0.6)
            ax.scatter(pts[:, 0], pts[:, 1], s=12, marker=s.marker, label=s.label)
        ax.axhline(0.0, color="grey", lw=0.5)
        ax.axvline(0.0, color="grey", lw=0.5)
        ax.set_xlabel(axis_labels[0])
        ax.set_ylabel(axis_labels[1])
        ax.set_aspect("equal", adjustable="datalim")
        if title:
            ax.set_title(title)
        if series or level_sets:
            ax.legend(loc="best", fontsize="small")

        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", bbox_inches="tight", metadata={"Date": None})
    finally:
        plt.close(fig)

    logger.info(f"Wrote {path}")
    return path
