"""Experiment configuration model - the declarative record driving a harness run."""

from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .enums import DynamicsMode, OpponentKind
from .game import GameInstance, JointState, PayoffMatrix, StepSizes


def parse_vector_text(value: Any) -> Any:
    """Accept "1, 2.5" as well as YAML lists and scalars for a vector."""
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",") if p.strip()]
        return [float(p) for p in parts]
    if isinstance(value, (int, float)):
        return [float(value)]
    return value


def parse_matrix_text(value: Any) -> Any:
    """Accept "1, 0; 0, 2" (rows separated by semicolons) as well as nested lists."""
    if isinstance(value, str):
        rows = [r for r in value.split(";") if r.strip()]
        return [parse_vector_text(r) for r in rows]
    return value


class ExperimentConfig(BaseModel):
    """
    Declarative description of one harness run.

    Loaded from YAML by `altgda.harness.config_loader`; every field maps to a
    flat key of the config file.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, use_enum_values=False)

    name: str = "experiment"
    """Run name, used for output file names."""

    matrix: PayoffMatrix
    """Payoff matrix A."""

    eta1: float
    eta2: float

    x1_0: list[float]
    """Agent 1's initial strategy."""

    x2_0: list[float]
    """Agent 2's initial strategy."""

    mode: DynamicsMode = DynamicsMode.ALT

    iterations: int = Field(default=0, ge=0)
    """Horizon T (rounds of updates)."""

    # Opponent (alt_vs_opponent mode)
    opponent: Optional[OpponentKind] = None
    opponent_value: Optional[list[float]] = None
    """Vector played by the constant opponent."""

    opponent_file: Optional[Path] = None
    """One x₂ vector per line for the scripted opponent."""

    opponent_seed: int = 0
    """Seed of the random opponent."""

    # Analysis
    epsilon: Optional[float] = None
    """Recurrence radius; defaults to 1% of the initial state norm."""

    comparator: Optional[list[float]] = None
    """Fixed strategy for the regret column; defaults to the zero vector."""

    # Continuous reference
    t_end: Optional[float] = None
    """Integration horizon of the continuous mode (defaults to iterations)."""

    substep: float = Field(default=1e-3, gt=0)

    # Volume tracking
    cloud: Optional[list[tuple[float, float]]] = None
    """Inline 2-D point cloud."""

    cloud_file: Optional[Path] = None
    """2-D point cloud file, one "x1, x2" pair per line."""

    snapshot_every: int = Field(default=1, ge=1)
    """Record the hull area every this many steps."""

    # Output
    output_dir: Path = Path("output")
    svg: bool = False
    """Also emit an SVG scatter (requires matplotlib)."""

    @field_validator("matrix", mode="before")
    @classmethod
    def _parse_matrix(cls, value: Any) -> Any:
        if isinstance(value, PayoffMatrix):
            return value
        return PayoffMatrix(entries=parse_matrix_text(value))

    @field_validator("x1_0", "x2_0", "opponent_value", "comparator", mode="before")
    @classmethod
    def _parse_vector(cls, value: Any) -> Any:
        if value is None:
            return value
        return parse_vector_text(value)

    @field_validator("cloud", mode="before")
    @classmethod
    def _parse_cloud(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [tuple(parse_vector_text(p)) for p in value.split(";") if p.strip()]
        return value

    @field_validator("eta1", "eta2")
    @classmethod
    def _positive_step(cls, value: float) -> float:
        if value <= 0:
            raise ValueError(f"step size must be positive, got {value}")
        return value

    @field_validator("epsilon")
    @classmethod
    def _positive_epsilon(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and value <= 0:
            raise ValueError(f"epsilon must be positive, got {value}")
        return value

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        k1, k2 = self.matrix.rows, self.matrix.cols
        if len(self.x1_0) != k1:
            raise ValueError(f"x1_0 has length {len(self.x1_0)}, payoff matrix has {k1} rows")
        if len(self.x2_0) != k2:
            raise ValueError(f"x2_0 has length {len(self.x2_0)}, payoff matrix has {k2} columns")
        if self.comparator is not None and len(self.comparator) != k1:
            raise ValueError(f"comparator has length {len(self.comparator)}, expected {k1}")
        if self.mode == DynamicsMode.ALT_VS_OPPONENT and self.opponent is None:
            raise ValueError("mode alt_vs_opponent requires an opponent")
        if self.opponent == OpponentKind.CONSTANT:
            if self.opponent_value is None or len(self.opponent_value) != k2:
                raise ValueError(f"constant opponent needs opponent_value of length {k2}")
        if self.opponent == OpponentKind.SCRIPTED and self.opponent_file is None:
            raise ValueError("scripted opponent needs opponent_file")
        if self.cloud is not None and (k1 != 1 or k2 != 1):
            raise ValueError("point clouds are only supported for 1x1 games")
        return self

    def to_game(self) -> GameInstance:
        """The game instance this configuration describes."""
        return GameInstance(
            matrix=self.matrix,
            steps=StepSizes(eta1=self.eta1, eta2=self.eta2),
            initial=JointState(x1=self.x1_0, x2=self.x2_0),
        )

    def to_flat_dict(self) -> dict[str, Any]:
        """Plain values suitable for YAML dumping."""
        data: dict[str, Any] = {
            "name": self.name,
            "matrix": self.matrix.entries.tolist(),
            "eta1": self.eta1,
            "eta2": self.eta2,
            "x1_0": list(self.x1_0),
            "x2_0": list(self.x2_0),
            "mode": self.mode.value,
            "iterations": self.iterations,
            "substep": self.substep,
            "snapshot_every": self.snapshot_every,
            "output_dir": str(self.output_dir),
            "svg": self.svg,
        }
        optional = {
            "opponent": self.opponent.value if self.opponent else None,
            "opponent_value": self.opponent_value,
            "opponent_file": str(self.opponent_file) if self.opponent_file else None,
            "opponent_seed": self.opponent_seed if self.opponent == OpponentKind.RANDOM else None,
            "epsilon": self.epsilon,
            "comparator": self.comparator,
            "t_end": self.t_end,
            "cloud": [list(p) for p in self.cloud] if self.cloud else None,
            "cloud_file": str(self.cloud_file) if self.cloud_file else None,
        }
        data.update({k: v for k, v in optional.items() if v is not None})
        return data
