"""Trajectory rollout - iterate an update rule from the game's initial state."""

from typing import TYPE_CHECKING, Callable, Optional, Union
import logging

import numpy as np

from ..errors import DivergenceError, OpponentContractError
from ..models import DynamicsMode, GameInstance, JointState, Stage, Trajectory
from .updates import ascent_update, descent_update

if TYPE_CHECKING:
    from ..opponents import OpponentRule

logger = logging.getLogger(__name__)

DIVERGENCE_LIMIT = 1e300
"""Largest admissible |component|; anything beyond counts as diverged."""

CHECK_EVERY = 1024
"""Rows written between two divergence checks."""

OpponentCallable = Callable[[int, JointState], np.ndarray]


class TrajectoryBuffer:
    """
    Preallocated storage for one rollout.

    Rows are written in order; `check()` scans the rows written since the
    previous check and raises DivergenceError carrying the partial trajectory
    up to the last Full state before the first out-of-range row.
    """

    def __init__(self, game: GameInstance, mode: DynamicsMode, rows: int):
        self.game = game
        self.mode = mode
        k1, k2 = game.matrix.shape
        self.x1 = np.empty((rows, k1))
        self.x2 = np.empty((rows, k2))
        self.t = np.zeros(rows, dtype=np.int64)
        self.half = np.zeros(rows, dtype=bool)
        self.sample_times: Optional[np.ndarray] = None
        self._checked = 0

    def put(self, row: int, x1: np.ndarray, x2: np.ndarray, t: int, half: bool = False) -> None:
        self.x1[row] = x1
        self.x2[row] = x2
        self.t[row] = t
        self.half[row] = half

    def due(self, row: int) -> bool:
        """At least CHECK_EVERY rows were written since the last check."""
        return row - self._checked >= CHECK_EVERY

    def check(self, upto: int) -> None:
        """Scan rows [last checked, upto) for divergence."""
        start, self._checked = self._checked, upto
        if upto <= start:
            return
        with np.errstate(over="ignore", invalid="ignore"):
            block = np.hstack([self.x1[start:upto], self.x2[start:upto]])
            bad = ~(np.abs(block) <= DIVERGENCE_LIMIT)
        rows = np.flatnonzero(bad.any(axis=1))
        if rows.size == 0:
            return

        row = start + int(rows[0])
        with np.errstate(invalid="ignore"):
            value = float(np.max(np.abs(np.hstack([self.x1[row], self.x2[row]]))))
        # Round (1-based) that produced the row: Half(t) comes from round t+1.
        step = int(self.t[row]) + (1 if self.half[row] else 0)
        if self.mode == DynamicsMode.CONTINUOUS:
            step = int(self.t[row])

        partial = None
        full_rows = np.flatnonzero(~self.half[:row])
        if full_rows.size:
            partial = self.build(int(full_rows[-1]) + 1)
        logger.warning(f"{self.mode.value} rollout diverged at step {step} (|x| = {value:.3e})")
        raise DivergenceError(step, value, partial)

    def build(self, rows: Optional[int] = None) -> Trajectory:
        n = self.t.shape[0] if rows is None else rows
        times = None if self.sample_times is None else self.sample_times[:n].copy()
        return Trajectory.from_arrays(
            self.game,
            self.mode,
            self.x1[:n].copy(),
            self.x2[:n].copy(),
            self.t[:n].copy(),
            self.half[:n].copy(),
            sample_times=times,
        )


def _require_horizon(T: int) -> None:
    if T < 0:
        raise ValueError(f"horizon must be nonnegative, got {T}")


def rollout(game: GameInstance, mode: DynamicsMode, T: int) -> Trajectory:
    """
    Iterate the chosen dynamic T times from `game.initial`.

    Alternating rollouts record the Half state of every round between the
    surrounding Full states. The continuous mode integrates up to time T with
    the default substep.

    Raises:
        DivergenceError: If a component leaves [-1e300, 1e300]; the error
            carries the trajectory recorded before the offending round.
    """
    _require_horizon(T)
    mode = DynamicsMode(mode)
    if mode == DynamicsMode.CONTINUOUS:
        from .continuous import continuous_reference

        return continuous_reference(game, float(T))
    if mode == DynamicsMode.ALT_VS_OPPONENT:
        raise ValueError("use rollout_vs_opponent for alt_vs_opponent rollouts")

    A, eta1, eta2 = game.A, game.eta1, game.eta2
    x1, x2 = game.initial.x1, game.initial.x2
    alternating = mode == DynamicsMode.ALT
    per_round = 2 if alternating else 1
    buf = TrajectoryBuffer(game, mode, per_round * T + 1)
    buf.put(0, x1, x2, 0)

    with np.errstate(over="ignore", invalid="ignore"):
        row = 1
        for t in range(T):
            if alternating:
                x1 = ascent_update(A, eta1, x1, x2)
                buf.put(row, x1, x2, t, half=True)
                x2 = descent_update(A, eta2, x1, x2)
                buf.put(row + 1, x1, x2, t + 1)
            else:
                x1, x2 = ascent_update(A, eta1, x1, x2), descent_update(A, eta2, x1, x2)
                buf.put(row, x1, x2, t + 1)
            row += per_round
            if buf.due(row):
                buf.check(row)
    buf.check(row)

    logger.debug(f"{mode.value} rollout finished: T={T}, {row} entries")
    return buf.build()


def rollout_vs_opponent(
    game: GameInstance,
    opponent: Union["OpponentRule", OpponentCallable],
    T: int,
) -> Trajectory:
    """
    Agent 1 plays Stage 1 every round; agent 2's next strategy comes from `opponent`.

    The opponent is called as `opponent(t, half_state)` and must return a finite
    vector of length k₂. Rules with a `reset()` method are reset first.

    Raises:
        OpponentContractError: If the opponent returns a malformed strategy.
        DivergenceError: As for `rollout`.
    """
    _require_horizon(T)
    reset = getattr(opponent, "reset", None)
    if callable(reset):
        reset()

    A, eta1 = game.A, game.eta1
    k2 = game.matrix.cols
    x1, x2 = game.initial.x1, game.initial.x2
    buf = TrajectoryBuffer(game, DynamicsMode.ALT_VS_OPPONENT, 2 * T + 1)
    buf.put(0, x1, x2, 0)

    with np.errstate(over="ignore", invalid="ignore"):
        row = 1
        for t in range(T):
            x1 = ascent_update(A, eta1, x1, x2)
            buf.put(row, x1, x2, t, half=True)
            x2 = _validated_strategy(opponent(t, JointState.trusted(x1, x2, t, Stage.HALF)), k2, t)
            buf.put(row + 1, x1, x2, t + 1)
            row += 2
            if buf.due(row):
                buf.check(row)
    buf.check(row)

    logger.debug(f"opponent rollout finished: T={T}, opponent={opponent!r}")
    return buf.build()


def _validated_strategy(value: object, k2: int, t: int) -> np.ndarray:
    try:
        x2 = np.asarray(value, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise OpponentContractError(f"strategy is not a real vector ({e})", t)
    if x2.shape != (k2,):
        raise OpponentContractError(f"expected a vector of length {k2}, got shape {x2.shape}", t)
    if not np.all(np.isfinite(x2)):
        raise OpponentContractError("strategy has non-finite components", t)
    return x2
