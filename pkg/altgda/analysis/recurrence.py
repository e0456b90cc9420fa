"""Near-return detection along alternating trajectories."""

from concurrent.futures import ThreadPoolExecutor
import math
import logging
from typing import Optional

import numpy as np

from ..errors import DimensionMismatchError
from ..models import DynamicsMode, GameInstance, RecurrenceReport, Trajectory
from ..metrics.utility import require_mode
from .volume import jacobian_altgd

logger = logging.getLogger(__name__)

DEFAULT_EPSILON_FRACTION = 0.01
"""Default return radius as a fraction of the initial state norm."""

MIN_EPSILON = 1e-12
DEGENERATE_TRACE_TOL = 1e-12


def default_epsilon(traj: Trajectory) -> float:
    """1% of ‖(x₁⁰, x₂⁰)‖ (or MIN_EPSILON at the origin)."""
    return max(DEFAULT_EPSILON_FRACTION * float(np.linalg.norm(traj.initial.concatenated)), MIN_EPSILON)


def _scan(points: np.ndarray, origin: np.ndarray, epsilon: float, offset: int):
    distances = np.linalg.norm(points - origin, axis=1)
    hits = np.flatnonzero(distances < epsilon) + offset
    if distances.size == 0:
        return hits, math.inf, None
    best = int(np.argmin(distances))
    return hits, float(distances[best]), best + offset


def recurrence_scan(
    traj: Trajectory,
    epsilon: Optional[float] = None,
    workers: int = 1,
) -> RecurrenceReport:
    """
    Euclidean distance of every Full state t ≥ 1 to the initial state.

    Lists every t with distance < epsilon and the closest approach. With
    workers > 1 the states are split into contiguous chunks scanned on a
    thread pool and merged by concatenation and minimum.

    Raises:
        WrongModeError: Unless the trajectory is alternating
        ValueError: If epsilon is not positive
    """
    require_mode(traj, DynamicsMode.ALT, operation="recurrence_scan")
    if epsilon is None:
        epsilon = default_epsilon(traj)
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")

    rows = np.flatnonzero(traj.full_mask)[1:]
    points = np.hstack([traj.x1[rows], traj.x2[rows]])
    times = traj.t[rows]
    origin = traj.initial.concatenated

    if workers > 1 and points.shape[0] > workers:
        bounds = np.linspace(0, points.shape[0], workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(
                    lambda lo_hi: _scan(points[lo_hi[0]:lo_hi[1]], origin, epsilon, lo_hi[0]),
                    zip(bounds[:-1], bounds[1:]),
                )
            )
        hits = np.concatenate([p[0] for p in parts])
        best_part = min(parts, key=lambda p: p[1])
        min_distance, argmin = best_part[1], best_part[2]
    else:
        hits, min_distance, argmin = _scan(points, origin, epsilon, 0)

    report = RecurrenceReport(
        epsilon=epsilon,
        return_times=[int(t) for t in times[hits]],
        min_distance_seen=min_distance,
        argmin_time=None if argmin is None else int(times[argmin]),
        horizon=traj.horizon,
    )
    logger.debug(
        f"recurrence scan: {len(report.return_times)} returns within {epsilon:.3g}, "
        f"closest {min_distance:.3g} at t={report.argmin_time}"
    )
    return report


def rotation_angle_2d(game: GameInstance) -> float:
    """
    Rotation angle θ = arccos(trace / 2) of the alternating map of a 1-D game.

    The map has determinant 1, so in the elliptic regime its eigenvalues are
    e^{±iθ} and near-returns are spaced about 2π/θ rounds apart. At the
    parabola boundary (trace = −2) θ = π is returned with a warning.

    Raises:
        DimensionMismatchError: Unless the game is 1×1
        ValueError: In the hyperbolic regime (trace < −2)
    """
    if game.matrix.shape != (1, 1):
        raise DimensionMismatchError(
            f"rotation angle needs a 1x1 game, got {game.matrix.rows}x{game.matrix.cols}"
        )
    trace = float(np.trace(jacobian_altgd(game).entries))
    if abs(trace + 2.0) <= DEGENERATE_TRACE_TOL:
        logger.warning("alternating map is degenerate (trace = -2): rotation by pi")
        return math.pi
    if trace < -2.0:
        raise ValueError(f"alternating map is hyperbolic (trace {trace:.6g} < -2); no rotation")
    return math.acos(min(1.0, trace / 2.0))


def rotation_period(theta: float) -> float:
    """Rounds per full revolution, 2π/θ."""
    return math.inf if theta == 0 else 2.0 * math.pi / theta
