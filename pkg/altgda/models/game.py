"""Game models - the bilinear zero-sum game, its strategies and payoff."""

from typing import Any, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..errors import DimensionMismatchError
from .enums import Stage


def as_vector(value: Any, name: str = "vector") -> np.ndarray:
    """Coerce a sequence of reals into a read-only finite float64 vector."""
    arr = np.array(value, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must not be empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite components")
    arr.flags.writeable = False
    return arr


class PayoffMatrix(BaseModel):
    """
    The k₁×k₂ matrix A of the bilinear game.

    Agent 1 receives ⟨x₁, A x₂⟩ and agent 2 receives its negation.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray
    """Dense row-major entries, shape (rows, cols)."""

    @field_validator("entries", mode="before")
    @classmethod
    def _coerce_entries(cls, value: Any) -> np.ndarray:
        arr = np.array(value, dtype=np.float64)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        elif arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise ValueError(f"payoff matrix must be two-dimensional, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("payoff matrix needs at least one row and one column")
        if not np.all(np.isfinite(arr)):
            raise ValueError("payoff matrix has non-finite entries")
        arr.flags.writeable = False
        return arr

    @classmethod
    def of(cls, rows: Sequence[Sequence[float]] | float) -> "PayoffMatrix":
        """Build a matrix from nested rows (or a scalar for the 1×1 game)."""
        return cls(entries=rows)

    @property
    def rows(self) -> int:
        """k₁, agent 1's strategy dimension."""
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        """k₂, agent 2's strategy dimension."""
        return int(self.entries.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def transpose(self) -> "PayoffMatrix":
        return PayoffMatrix(entries=self.entries.T)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PayoffMatrix):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))


class StepSizes(BaseModel):
    """Fixed learning rates (η₁, η₂)."""

    model_config = ConfigDict(frozen=True)

    eta1: float
    """Agent 1's step size."""

    eta2: float
    """Agent 2's step size."""

    @field_validator("eta1", "eta2")
    @classmethod
    def _positive(cls, value: float) -> float:
        if not np.isfinite(value) or value <= 0:
            raise ValueError(f"step sizes must be positive and finite, got {value}")
        return float(value)

    @property
    def geometric_mean(self) -> float:
        """√(η₁η₂), the quantity gated by the safety condition."""
        return float(np.sqrt(self.eta1 * self.eta2))


class JointState(BaseModel):
    """
    The joint strategy (x₁, x₂) at an iteration index.

    A Half state with index t is the half-iterate (x₁ᵗ⁺¹, x₂ᵗ) sitting at time t+½.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x1: np.ndarray
    """Agent 1's strategy in ℝ^k₁."""

    x2: np.ndarray
    """Agent 2's strategy in ℝ^k₂."""

    t: int = 0
    """Iteration index (the Half state of round t carries t)."""

    stage: Stage = Stage.FULL
    """Whether both agents have moved in round t."""

    @field_validator("x1", "x2", mode="before")
    @classmethod
    def _coerce_vector(cls, value: Any, info) -> np.ndarray:
        return as_vector(value, info.field_name)

    @field_validator("t")
    @classmethod
    def _nonnegative(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"iteration index must be nonnegative, got {value}")
        return value

    @classmethod
    def trusted(cls, x1: np.ndarray, x2: np.ndarray, t: int, stage: Stage) -> "JointState":
        """Build from already-validated float64 arrays, skipping validation."""
        return cls.model_construct(x1=x1, x2=x2, t=t, stage=stage)

    @property
    def time(self) -> float:
        """t for Full states, t+½ for Half states."""
        return self.t + (0.5 if self.stage == Stage.HALF else 0.0)

    @property
    def is_half(self) -> bool:
        return self.stage == Stage.HALF

    @property
    def concatenated(self) -> np.ndarray:
        """The point (x₁, x₂) of ℝ^(k₁+k₂)."""
        return np.concatenate([self.x1, self.x2])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JointState):
            return NotImplemented
        return (
            self.t == other.t
            and self.stage == other.stage
            and np.array_equal(self.x1, other.x1)
            and np.array_equal(self.x2, other.x2)
        )


class GameInstance(BaseModel):
    """A payoff matrix, the agents' step sizes and the initial joint strategy."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: PayoffMatrix
    steps: StepSizes
    initial: JointState

    @model_validator(mode="after")
    def _check_initial(self) -> "GameInstance":
        if self.initial.t != 0 or self.initial.stage != Stage.FULL:
            raise ValueError("initial state must be the Full state at t = 0")
        check_dimensions(self.matrix, self.initial)
        return self

    @classmethod
    def build(
        cls,
        matrix: Sequence[Sequence[float]] | float | PayoffMatrix,
        eta1: float,
        eta2: float,
        x1: Sequence[float] | float,
        x2: Sequence[float] | float,
    ) -> "GameInstance":
        """Convenience constructor from plain numbers."""
        if not isinstance(matrix, PayoffMatrix):
            matrix = PayoffMatrix(entries=matrix)
        return cls(
            matrix=matrix,
            steps=StepSizes(eta1=eta1, eta2=eta2),
            initial=JointState(x1=x1, x2=x2),
        )

    @property
    def A(self) -> np.ndarray:
        return self.matrix.entries

    @property
    def eta1(self) -> float:
        return self.steps.eta1

    @property
    def eta2(self) -> float:
        return self.steps.eta2

    def with_initial(self, x1: Sequence[float], x2: Sequence[float]) -> "GameInstance":
        """Same game and step sizes from another starting point."""
        return GameInstance(matrix=self.matrix, steps=self.steps, initial=JointState(x1=x1, x2=x2))

    def with_steps(self, eta1: float, eta2: float) -> "GameInstance":
        return GameInstance(
            matrix=self.matrix, steps=StepSizes(eta1=eta1, eta2=eta2), initial=self.initial
        )


def check_dimensions(matrix: PayoffMatrix, s: JointState) -> None:
    """Raise DimensionMismatchError unless len(x₁) = k₁ and len(x₂) = k₂."""
    if s.x1.shape[0] != matrix.rows or s.x2.shape[0] != matrix.cols:
        raise DimensionMismatchError(
            f"state dimensions ({s.x1.shape[0]}, {s.x2.shape[0]}) do not match "
            f"payoff matrix {matrix.rows}x{matrix.cols}"
        )


def payoff(game: GameInstance, s: JointState) -> float:
    """Agent 1's utility ⟨x₁, A x₂⟩."""
    check_dimensions(game.matrix, s)
    return float(s.x1 @ (game.A @ s.x2))


def payoff_agent2(game: GameInstance, s: JointState) -> float:
    """Agent 2's utility, the exact negation of agent 1's."""
    return -payoff(game, s)
