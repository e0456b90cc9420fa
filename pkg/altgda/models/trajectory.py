"""Trajectory model - time-ordered joint states of one rollout."""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .enums import DynamicsMode, Stage
from .game import GameInstance, JointState


class Trajectory(BaseModel):
    """
    Time-ordered joint states produced by one rollout.

    States are stored column-wise in arrays so long rollouts stay cheap; individual
    entries are exposed as JointState views. Alternating trajectories interleave
    Full and Half entries:

        Full(0), Half(0), Full(1), Half(1), ..., Full(T)

    where Half(t) is the half-iterate (x₁ᵗ⁺¹, x₂ᵗ).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    game: GameInstance
    mode: DynamicsMode

    x1: np.ndarray
    """Agent 1's strategies, shape (n, k₁)."""

    x2: np.ndarray
    """Agent 2's strategies, shape (n, k₂)."""

    t: np.ndarray
    """Iteration index of every entry, shape (n,)."""

    half: np.ndarray
    """True where the entry is a Half state, shape (n,)."""

    sample_times: Optional[np.ndarray] = None
    """Continuous time of each sample (continuous mode only)."""

    @model_validator(mode="after")
    def _check_layout(self) -> "Trajectory":
        n = self.t.shape[0]
        if self.x1.shape[0] != n or self.x2.shape[0] != n or self.half.shape[0] != n:
            raise ValueError("trajectory arrays must have the same length")
        if n == 0:
            raise ValueError("trajectory must contain at least the initial state")
        if np.any(np.diff(self.t) < 0):
            raise ValueError("iteration indices must be nondecreasing")
        if self.half[0] or self.t[0] != 0:
            raise ValueError("trajectory must start at the Full state t = 0")
        return self

    @classmethod
    def from_arrays(
        cls,
        game: GameInstance,
        mode: DynamicsMode,
        x1: np.ndarray,
        x2: np.ndarray,
        t: np.ndarray,
        half: np.ndarray,
        sample_times: Optional[np.ndarray] = None,
    ) -> "Trajectory":
        for arr in (x1, x2, t, half):
            arr.flags.writeable = False
        return cls(
            game=game, mode=mode, x1=x1, x2=x2, t=t, half=half, sample_times=sample_times
        )

    # -------------------------------------------------------------------------
    # Access
    # -------------------------------------------------------------------------

    def __len__(self) -> int:
        return int(self.t.shape[0])

    def state(self, index: int) -> JointState:
        """The entry at position `index` as a JointState."""
        return JointState.trusted(
            self.x1[index],
            self.x2[index],
            int(self.t[index]),
            Stage.HALF if self.half[index] else Stage.FULL,
        )

    @property
    def states(self) -> list[JointState]:
        return [self.state(i) for i in range(len(self))]

    @property
    def initial(self) -> JointState:
        return self.state(0)

    @property
    def final(self) -> JointState:
        return self.state(len(self) - 1)

    @property
    def has_half_states(self) -> bool:
        return bool(np.any(self.half))

    @property
    def horizon(self) -> int:
        """Number of completed rounds (index of the last Full state)."""
        full_t = self.t[~self.half]
        return int(full_t[-1])

    @property
    def full_mask(self) -> np.ndarray:
        return ~self.half

    def full_x1(self) -> np.ndarray:
        return self.x1[~self.half]

    def full_x2(self) -> np.ndarray:
        return self.x2[~self.half]

    def half_x1(self) -> np.ndarray:
        return self.x1[self.half]

    def half_x2(self) -> np.ndarray:
        return self.x2[self.half]

    def full_states(self) -> list[JointState]:
        return [self.state(i) for i in np.flatnonzero(~self.half)]

    def half_states(self) -> list[JointState]:
        return [self.state(i) for i in np.flatnonzero(self.half)]

    def points(self) -> np.ndarray:
        """Every entry as a concatenated point (x₁, x₂), shape (n, k₁+k₂)."""
        return np.hstack([self.x1, self.x2])
