"""Convex hull area of planar point clouds (monotone chain + shoelace)."""

from dataclasses import dataclass, field
import logging
from typing import Any

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HullArea:
    """Area of a convex hull and whether the hull was degenerate."""

    area: float
    degenerate: bool = False
    vertices: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    """Hull vertices in counter-clockwise order."""


def _cross(o: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """z-component of (a − o) × (b − o); positive for a left turn."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Any) -> np.ndarray:
    """Hull vertices counter-clockwise, collinear points dropped."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    pts = np.unique(pts, axis=0)  # lexicographic by (x, y)
    if pts.shape[0] < 3:
        return pts

    lower: list[np.ndarray] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)

    upper: list[np.ndarray] = []
    for p in pts[::-1]:
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)

    return np.array(lower[:-1] + upper[:-1])


def shoelace_area(vertices: np.ndarray) -> float:
    """Area of a simple polygon with ordered vertices."""
    x, y = vertices[:, 0], vertices[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2.0)


def hull_area_2d(points: Any) -> HullArea:
    """
    Area of the convex hull of a 2-D point cloud.

    Fewer than three distinct points, or all points collinear, give area 0 with
    the degenerate flag set.
    """
    vertices = convex_hull(points)
    if vertices.shape[0] < 3:
        logger.debug(f"Degenerate hull with {vertices.shape[0]} vertices")
        return HullArea(area=0.0, degenerate=True, vertices=vertices)
    return HullArea(area=shoelace_area(vertices), degenerate=False, vertices=vertices)
