"""Built-in opponent rules."""

from pathlib import Path
from typing import Any, Optional
import logging

import numpy as np

from ..engine.updates import descent_update
from ..errors import ConfigError, OpponentContractError
from ..models import GameInstance, JointState
from .base import OpponentRule

logger = logging.getLogger(__name__)


class Stage2Opponent(OpponentRule):
    """Agent 2 plays the alternating Stage 2 update."""

    name = "stage2"
    description = "x₂ᵗ⁺¹ = x₂ᵗ − η₂ Aᵀ x₁ᵗ⁺¹"

    def next_strategy(self, t: int, state: JointState) -> np.ndarray:
        return descent_update(self.game.A, self.game.eta2, state.x1, state.x2)


class ConstantOpponent(OpponentRule):
    """Agent 2 always plays the configured vector `value`."""

    name = "constant"
    description = "x₂ᵗ⁺¹ = c for every round"

    def __init__(self, game: GameInstance, config: Optional[dict[str, Any]] = None):
        super().__init__(game, config)
        value = self.get_config("value")
        if value is None:
            raise ConfigError("constant opponent needs a 'value'")
        self.value = np.array(value, dtype=np.float64)

    def next_strategy(self, t: int, state: JointState) -> np.ndarray:
        return self.value.copy()


class ZeroOpponent(OpponentRule):
    """Agent 2 always plays the zero vector."""

    name = "zero"
    description = "x₂ᵗ⁺¹ = 0 for every round"

    def next_strategy(self, t: int, state: JointState) -> np.ndarray:
        return np.zeros(self.game.matrix.cols)


class RandomOpponent(OpponentRule):
    """Agent 2 plays independent uniform draws from [-scale, scale]^k₂."""

    name = "random"
    description = "seeded uniform noise"
    default_config = {"seed": 0, "scale": 1.0}

    def __init__(self, game: GameInstance, config: Optional[dict[str, Any]] = None):
        super().__init__(game, config)
        self.reset()

    def reset(self) -> None:
        self._rng = np.random.default_rng(self.get_config("seed"))

    def next_strategy(self, t: int, state: JointState) -> np.ndarray:
        scale = float(self.get_config("scale"))
        return self._rng.uniform(-scale, scale, size=self.game.matrix.cols)


class ScriptedOpponent(OpponentRule):
    """
    Agent 2 replays vectors from a file, one per line.

    Lines hold comma- or whitespace-separated reals; blank lines and lines
    starting with '#' are skipped. Round t plays the t-th vector.
    """

    name = "scripted"
    description = "x₂ᵗ⁺¹ read from a file"

    def __init__(self, game: GameInstance, config: Optional[dict[str, Any]] = None):
        super().__init__(game, config)
        path = self.get_config("path")
        if path is None:
            raise ConfigError("scripted opponent needs a 'path'")
        self.path = Path(path)
        self.script = load_script(self.path, game.matrix.cols)
        logger.info(f"Loaded {len(self.script)} scripted opponent moves from {self.path}")

    def next_strategy(self, t: int, state: JointState) -> np.ndarray:
        if t >= len(self.script):
            raise OpponentContractError(
                f"script {self.path} has only {len(self.script)} moves", t
            )
        return self.script[t].copy()


def load_script(path: Path, k2: int) -> list[np.ndarray]:
    """
    Read one x₂ vector per line, failing fast on the first bad line.

    Raises:
        ConfigError: With the 1-based line number of a malformed or
            wrong-length line, or if the file cannot be read.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read opponent script: {e}", source=str(path))

    moves: list[np.ndarray] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            vector = np.array([float(v) for v in line.replace(",", " ").split()])
        except ValueError:
            raise ConfigError(f"not a vector of reals: {line!r}", line=lineno, source=str(path))
        if vector.shape[0] != k2:
            raise ConfigError(
                f"expected {k2} components, got {vector.shape[0]}", line=lineno, source=str(path)
            )
        if not np.all(np.isfinite(vector)):
            raise ConfigError("non-finite component", line=lineno, source=str(path))
        moves.append(vector)
    return moves
