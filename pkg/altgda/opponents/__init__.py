"""Opponent rules for rollouts where agent 2 plays arbitrarily."""

from .base import OpponentRule
from .builtin import (
    Stage2Opponent,
    ConstantOpponent,
    ZeroOpponent,
    RandomOpponent,
    ScriptedOpponent,
    load_script,
)
from .registry import OpponentRegistry, default_registry

__all__ = [
    "OpponentRule",
    "Stage2Opponent",
    "ConstantOpponent",
    "ZeroOpponent",
    "RandomOpponent",
    "ScriptedOpponent",
    "load_script",
    "OpponentRegistry",
    "default_registry",
]
