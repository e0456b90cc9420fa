"""Dense linear algebra kernel and planar hull geometry."""

from .linalg import SquareMatrix, mat_vec, mat_tvec, spectral_norm, det
from .hull import HullArea, convex_hull, hull_area_2d, shoelace_area

__all__ = [
    "SquareMatrix",
    "mat_vec",
    "mat_tvec",
    "spectral_norm",
    "det",
    "HullArea",
    "convex_hull",
    "hull_area_2d",
    "shoelace_area",
]
