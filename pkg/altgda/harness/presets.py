"""Figure presets - the experiments behind the four reference figures."""

from pathlib import Path
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import ConfigError
from ..models import DynamicsMode, ExperimentConfig
from .svg import LevelSet


class FigurePreset(BaseModel):
    """One or more experiment configs reproducing a figure."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    description: str
    configs: list[ExperimentConfig]
    level_sets: list[LevelSet] = Field(default_factory=list)
    """Reference curves drawn in the SVG output (qualitative)."""


def cat_cloud(center: tuple[float, float] = (2.0, 0.0), scale: float = 0.5) -> np.ndarray:
    """
    A deterministic cat-shaped point cloud: round head, two ears, eyes, nose.

    Returns:
        Array of shape (N, 2)
    """
    angles = np.linspace(0.0, 2.0 * np.pi, 48, endpoint=False)
    head = np.column_stack([np.cos(angles), 0.85 * np.sin(angles)])

    parts = [head]
    for side in (-1.0, 1.0):
        base_outer = np.array([side * 0.95, 0.35])
        base_inner = np.array([side * 0.25, 0.8])
        tip = np.array([side * 0.75, 1.45])
        for u in np.linspace(0.0, 1.0, 8):
            parts.append(np.array([base_outer + u * (tip - base_outer), base_inner + u * (tip - base_inner)]))
        eye = np.array([side * 0.38, 0.2])
        parts.append(eye + 0.1 * np.column_stack([np.cos(angles[::6]), np.sin(angles[::6])]))
    parts.append(np.array([[0.0, -0.1], [-0.08, -0.2], [0.08, -0.2], [0.0, -0.35]]))

    points = np.vstack(parts)
    return points * scale + np.asarray(center, dtype=np.float64)


def _config(name: str, output_dir: Path, **fields) -> ExperimentConfig:
    base = {"matrix": [[1.0]], "comparator": [0.0], "svg": True, "output_dir": output_dir}
    return ExperimentConfig(name=name, **{**base, **fields})


def fig1(output_dir: Path) -> FigurePreset:
    return FigurePreset(
        name="fig1",
        description="125 alternating rounds from (35, 35), A=[1], eta=(1/2, 1/2)",
        configs=[
            _config("fig1", output_dir, eta1=0.5, eta2=0.5, x1_0=[35.0], x2_0=[35.0], iterations=125)
        ],
    )


def fig2a(output_dir: Path) -> FigurePreset:
    return FigurePreset(
        name="fig2a",
        description="50 alternating rounds from (60, 0), eta=(1/2, 1/2)",
        configs=[
            _config("fig2a", output_dir, eta1=0.5, eta2=0.5, x1_0=[60.0], x2_0=[0.0], iterations=50)
        ],
        level_sets=[LevelSet(label="|x1|^2 + |x2|^2 = 60^2", a=60.0, b=60.0)],
    )


def fig2b(output_dir: Path) -> FigurePreset:
    r = 60.0
    return FigurePreset(
        name="fig2b",
        description="50 alternating rounds from (60, 0), eta=(1, 1/2)",
        configs=[
            _config("fig2b", output_dir, eta1=1.0, eta2=0.5, x1_0=[60.0], x2_0=[0.0], iterations=50)
        ],
        level_sets=[LevelSet(label="|x1|^2 + 2|x2|^2 = 60^2", a=r, b=r / np.sqrt(2.0))],
    )


def fig3(output_dir: Path) -> FigurePreset:
    common = dict(eta1=0.5, eta2=0.5, x1_0=[40.0], x2_0=[0.0], iterations=10)
    return FigurePreset(
        name="fig3",
        description="10 simultaneous and alternating rounds from (40, 0)",
        configs=[
            _config("fig3_sim", output_dir, mode=DynamicsMode.SIM, **common),
            _config("fig3_alt", output_dir, mode=DynamicsMode.ALT, **common),
        ],
        level_sets=[LevelSet(label="|x1|^2 + |x2|^2 = 40^2", a=40.0, b=40.0)],
    )


def fig4(output_dir: Path) -> FigurePreset:
    cloud = [tuple(p) for p in cat_cloud().tolist()]
    common = dict(
        eta1=0.2, eta2=0.2, x1_0=[2.0], x2_0=[0.0], iterations=24, cloud=cloud, snapshot_every=4
    )
    return FigurePreset(
        name="fig4",
        description="cat cloud after 0, 4, ..., 24 simultaneous and alternating rounds",
        configs=[
            _config("fig4_sim", output_dir, mode=DynamicsMode.SIM, **common),
            _config("fig4_alt", output_dir, mode=DynamicsMode.ALT, **common),
        ],
    )


PRESETS: dict[str, Callable[[Path], FigurePreset]] = {
    "fig1": fig1,
    "fig2a": fig2a,
    "fig2b": fig2b,
    "fig3": fig3,
    "fig4": fig4,
}


def get_preset(name: str, output_dir: Optional[Path] = None) -> FigurePreset:
    """
    Build the named preset.

    Raises:
        ConfigError: For an unknown preset name
    """
    factory = PRESETS.get(name)
    if factory is None:
        raise ConfigError(f"unknown preset '{name}' (available: {', '.join(PRESETS)})")
    return factory(Path(output_dir) if output_dir else Path("output"))
