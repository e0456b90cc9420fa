"""Trajectory, metrics and report persistence.

Floats are written with `repr`, which round-trips every double exactly, so a
re-read trajectory reproduces the emitted metrics bit for bit.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

import numpy as np

from ..errors import ConfigError
from ..models import DynamicsMode, GameInstance, Stage, Trajectory

logger = logging.getLogger(__name__)

METRICS_COLUMNS = ["t", "perturbed_energy", "weighted_energy", "cum_utility", "regret_vs_comparator"]


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return "" if np.isnan(value) else repr(value)
    if isinstance(value, (np.integer,)):
        return str(int(value))
    return str(value)


def trajectory_header(k1: int, k2: int) -> list[str]:
    return ["t", "stage"] + [f"x1_{i}" for i in range(k1)] + [f"x2_{j}" for j in range(k2)]


def write_trajectory_csv(traj: Trajectory, path: Path) -> Path:
    """Write one row per trajectory entry: t, stage, x1_*, x2_*."""
    k1, k2 = traj.game.matrix.shape
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(trajectory_header(k1, k2))
        for i in range(len(traj)):
            stage = Stage.HALF if traj.half[i] else Stage.FULL
            writer.writerow(
                [int(traj.t[i]), stage.value]
                + [_cell(v) for v in traj.x1[i]]
                + [_cell(v) for v in traj.x2[i]]
            )
    logger.debug(f"Wrote {len(traj)} trajectory rows to {path}")
    return path


def read_trajectory_csv(path: Path, game: GameInstance, mode: DynamicsMode) -> Trajectory:
    """
    Re-ingest a trajectory CSV written by `write_trajectory_csv`.

    Raises:
        ConfigError: With the line number of a malformed row
    """
    k1, k2 = game.matrix.shape
    expected = trajectory_header(k1, k2)
    x1_rows, x2_rows, t_rows, half_rows = [], [], [], []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != expected:
            raise ConfigError(f"unexpected header {header}, expected {expected}", line=1, source=str(path))
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(expected):
                raise ConfigError(
                    f"expected {len(expected)} columns, got {len(row)}", line=lineno, source=str(path)
                )
            try:
                t_rows.append(int(row[0]))
                half_rows.append(Stage(row[1]) == Stage.HALF)
                values = [float(v) for v in row[2:]]
            except ValueError as e:
                raise ConfigError(str(e), line=lineno, source=str(path))
            x1_rows.append(values[:k1])
            x2_rows.append(values[k1:])

    return Trajectory.from_arrays(
        game,
        mode,
        np.array(x1_rows, dtype=np.float64).reshape(-1, k1),
        np.array(x2_rows, dtype=np.float64).reshape(-1, k2),
        np.array(t_rows, dtype=np.int64),
        np.array(half_rows, dtype=bool),
    )


def write_columns_csv(path: Path, columns: Mapping[str, Sequence[Any]]) -> Path:
    """Write equally long columns with a header row, in mapping order."""
    names = list(columns)
    lengths = {len(columns[n]) for n in names}
    if len(lengths) > 1:
        raise ValueError(f"columns have different lengths: {sorted(lengths)}")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(names)
        for row in zip(*(columns[n] for n in names)):
            writer.writerow([_cell(v) for v in row])
    logger.debug(f"Wrote {lengths.pop() if lengths else 0} rows to {path}")
    return path


def read_columns_csv(path: Path) -> dict[str, np.ndarray]:
    """Read a numeric CSV into float columns; empty cells become NaN."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        names = next(reader)
        rows = [[float(v) if v != "" else np.nan for v in row] for row in reader]
    data = np.array(rows, dtype=np.float64).reshape(-1, len(names))
    return {name: data[:, i] for i, name in enumerate(names)}


def write_metrics_csv(path: Path, metrics: Mapping[str, Sequence[Any]]) -> Path:
    """Write the per-Full-state metrics table."""
    missing = [c for c in METRICS_COLUMNS if c not in metrics]
    if missing:
        raise ValueError(f"metrics table is missing columns {missing}")
    return write_columns_csv(path, {c: metrics[c] for c in METRICS_COLUMNS})


def write_json_report(path: Path, report: Mapping[str, Any]) -> Path:
    """Write a report as indented JSON with sorted keys."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(report, indent=2, sort_keys=True, default=_json_default))
        f.write("\n")
    logger.debug(f"Wrote report {path}")
    return path


def read_json_report(path: Path, default: Optional[Any] = None) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return default


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return str(value)
