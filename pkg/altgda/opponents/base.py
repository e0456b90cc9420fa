"""Base OpponentRule class - how agent 2 answers agent 1's half-iterate."""

from abc import ABC, abstractmethod
from typing import Any, Optional
import logging

import numpy as np

from ..models import GameInstance, JointState

logger = logging.getLogger(__name__)


class OpponentRule(ABC):
    """
    Base class for agent 2's update rule in rollouts against arbitrary opponents.

    Each round agent 1 applies Stage 1; the rule then receives the round index t
    and the Half state (x₁ᵗ⁺¹, x₂ᵗ) and returns x₂ᵗ⁺¹. Rules are bound to one
    game at construction and may keep per-rollout state; `reset()` is called
    before every rollout.

    Example:
        class MirrorOpponent(OpponentRule):
            name = "mirror"
            description = "Plays agent 1's half-iterate back"

            def next_strategy(self, t, state):
                return state.x1.copy()
    """

    # -------------------------------------------------------------------------
    # Metadata (must be defined by subclasses)
    # -------------------------------------------------------------------------

    name: str = ""
    """Unique identifier used in configs and the registry."""

    description: str = ""

    default_config: dict[str, Any] = {}
    """Default values for configuration options."""

    def __init__(self, game: GameInstance, config: Optional[dict[str, Any]] = None):
        """
        Bind the rule to a game.

        Args:
            game: The game the rule plays in
            config: Configuration overrides
        """
        self.game = game
        self._config = {**self.default_config, **(config or {})}

    @property
    def config(self) -> dict[str, Any]:
        return self._config

    def get_config(self, key: str, default: Any = None) -> Any:
        return self._config.get(key, default)

    # -------------------------------------------------------------------------
    # Rule
    # -------------------------------------------------------------------------

    @abstractmethod
    def next_strategy(self, t: int, state: JointState) -> np.ndarray:
        """
        Agent 2's strategy for round t.

        Args:
            t: Round index (0-based)
            state: The Half state after agent 1's update in round t

        Returns:
            x₂ᵗ⁺¹, a vector of length k₂
        """

    def reset(self) -> None:
        """Called before each rollout; stateful rules rewind here."""

    def __call__(self, t: int, state: JointState) -> np.ndarray:
        return self.next_strategy(t, state)

    def __repr__(self) -> str:
        return f"<OpponentRule {self.name}>"
