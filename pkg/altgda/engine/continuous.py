"""Continuous-time reference dynamics, integrated with classical RK4.

    dx₁/dt = η₁ A x₂,    dx₂/dt = −η₂ Aᵀ x₁

Used as a test oracle for the discrete updates, not as a product dynamic.
"""

import math
import logging

import numpy as np

from ..errors import DivergenceError
from ..models import DynamicsMode, GameInstance, Trajectory
from .rollout import DIVERGENCE_LIMIT, TrajectoryBuffer

logger = logging.getLogger(__name__)

DEFAULT_SUBSTEP = 1e-3


def _vector_field(A: np.ndarray, eta1: float, eta2: float, x1: np.ndarray, x2: np.ndarray):
    return eta1 * (A @ x2), -eta2 * (A.T @ x1)


def rk4_step(
    A: np.ndarray, eta1: float, eta2: float, x1: np.ndarray, x2: np.ndarray, h: float
) -> tuple[np.ndarray, np.ndarray]:
    """One classical fourth-order Runge-Kutta step of size h."""
    a1, b1 = _vector_field(A, eta1, eta2, x1, x2)
    a2, b2 = _vector_field(A, eta1, eta2, x1 + 0.5 * h * a1, x2 + 0.5 * h * b1)
    a3, b3 = _vector_field(A, eta1, eta2, x1 + 0.5 * h * a2, x2 + 0.5 * h * b2)
    a4, b4 = _vector_field(A, eta1, eta2, x1 + h * a3, x2 + h * b3)
    x1 = x1 + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    x2 = x2 + (h / 6.0) * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
    return x1, x2


def continuous_reference(
    game: GameInstance,
    t_end: float,
    h: float = DEFAULT_SUBSTEP,
    record_every: int = 1,
) -> Trajectory:
    """
    Integrate the continuous dynamics from `game.initial` up to time `t_end`.

    The interval is split into n = ceil(t_end / h) equal substeps so the last
    sample lands exactly on t_end. Entries are indexed by substep count; their
    continuous times are in `sample_times`.

    Args:
        game: Game whose matrix, step sizes and initial state are used
        t_end: Final time (≥ 0)
        h: Requested substep (> 0); the effective substep is t_end / n
        record_every: Keep every this many substeps (the final one always)

    Raises:
        ValueError: On a nonpositive substep or negative horizon
        DivergenceError: If a component leaves the representable range
    """
    if not h > 0:
        raise ValueError(f"substep must be positive, got {h}")
    if not t_end >= 0:
        raise ValueError(f"t_end must be nonnegative, got {t_end}")
    if record_every < 1:
        raise ValueError(f"record_every must be at least 1, got {record_every}")

    n = math.ceil(t_end / h) if t_end > 0 else 0
    h_eff = t_end / n if n else h
    recorded = list(range(record_every, n + 1, record_every))
    if n and (not recorded or recorded[-1] != n):
        recorded.append(n)

    A, eta1, eta2 = game.A, game.eta1, game.eta2
    x1, x2 = game.initial.x1, game.initial.x2
    buf = TrajectoryBuffer(game, DynamicsMode.CONTINUOUS, len(recorded) + 1)
    buf.sample_times = np.zeros(len(recorded) + 1)
    buf.put(0, x1, x2, 0)

    row = 1
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, n + 1):
            x1, x2 = rk4_step(A, eta1, eta2, x1, x2, h_eff)
            value = float(np.max(np.abs(np.concatenate([x1, x2]))))
            if not value <= DIVERGENCE_LIMIT:
                logger.warning(f"continuous reference diverged at substep {step} (|x| = {value:.3e})")
                raise DivergenceError(step, value, buf.build(row))
            if row < len(recorded) + 1 and recorded[row - 1] == step:
                buf.put(row, x1, x2, step)
                buf.sample_times[row] = step * h_eff
                row += 1

    logger.debug(f"continuous reference finished: t_end={t_end}, {n} substeps of {h_eff:.3e}")
    return buf.build()
