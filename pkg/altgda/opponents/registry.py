"""Opponent registry - lookup of opponent rules by name."""

from typing import Any, Optional
import logging

from ..errors import ConfigError
from ..models import ExperimentConfig, GameInstance, OpponentKind
from .base import OpponentRule
from .builtin import (
    ConstantOpponent,
    RandomOpponent,
    ScriptedOpponent,
    Stage2Opponent,
    ZeroOpponent,
)

logger = logging.getLogger(__name__)


class OpponentRegistry:
    """
    Central registry of opponent rule classes.

    Rules are registered as classes and instantiated per game with `create()`.
    """

    def __init__(self):
        self._rules: dict[str, type[OpponentRule]] = {}

    def register(self, rule: type[OpponentRule]) -> None:
        """
        Register an opponent rule class.

        Raises:
            ValueError: If the class has no name or the name is taken
        """
        if not rule.name:
            raise ValueError(f"Opponent rule {rule.__name__} has no name")
        if rule.name in self._rules:
            raise ValueError(f"Opponent rule '{rule.name}' is already registered")
        self._rules[rule.name] = rule
        logger.debug(f"Registered opponent rule: {rule.name}")

    def unregister(self, name: str) -> Optional[type[OpponentRule]]:
        return self._rules.pop(name, None)

    def get(self, name: str) -> Optional[type[OpponentRule]]:
        return self._rules.get(name)

    def get_names(self) -> list[str]:
        return list(self._rules.keys())

    def has(self, name: str) -> bool:
        return name in self._rules

    def create(
        self,
        name: str,
        game: GameInstance,
        config: Optional[dict[str, Any]] = None,
    ) -> OpponentRule:
        """
        Instantiate the rule `name` bound to `game`.

        Raises:
            ConfigError: If no rule of that name is registered
        """
        rule = self.get(name)
        if rule is None:
            raise ConfigError(
                f"unknown opponent '{name}' (available: {', '.join(self.get_names())})"
            )
        return rule(game, config)

    def from_experiment(self, config: ExperimentConfig, game: GameInstance) -> OpponentRule:
        """Build the opponent an experiment config names."""
        if config.opponent is None:
            raise ConfigError("experiment config names no opponent")
        kind = OpponentKind(config.opponent)
        options: dict[str, Any] = {}
        if kind == OpponentKind.CONSTANT:
            options["value"] = config.opponent_value
        elif kind == OpponentKind.SCRIPTED:
            options["path"] = config.opponent_file
        elif kind == OpponentKind.RANDOM:
            options["seed"] = config.opponent_seed
        return self.create(kind.value, game, options)

    def __len__(self) -> int:
        return len(self._rules)

    def __contains__(self, name: str) -> bool:
        return name in self._rules

    def __iter__(self):
        return iter(self._rules.values())


def default_registry() -> OpponentRegistry:
    """A registry holding every built-in rule."""
    registry = OpponentRegistry()
    for rule in (Stage2Opponent, ConstantOpponent, ZeroOpponent, RandomOpponent, ScriptedOpponent):
        registry.register(rule)
    return registry
