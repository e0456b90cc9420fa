"""Load experiment configurations from YAML files."""

import logging
import os
from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import ValidationError

from ..errors import ConfigError
from ..models import ExperimentConfig

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "ALTGDA_OUTPUT_DIR"


def load_experiment_from_yaml(config_path: Path) -> ExperimentConfig:
    """
    Load one experiment configuration from a YAML file.

    Expected format (a flat mapping):

    ```yaml
    name: fig1
    matrix: "1"            # or [[1]]; rows separated by ';' in string form
    eta1: 0.5
    eta2: 0.5
    x1_0: "35"             # or [35]
    x2_0: "35"
    mode: alt
    iterations: 125
    ```

    Relative `opponent_file` and `cloud_file` paths are resolved against the
    config file's directory. `ALTGDA_OUTPUT_DIR` overrides `output_dir`.

    Args:
        config_path: Path to the YAML configuration file

    Returns:
        The validated ExperimentConfig

    Raises:
        ConfigError: With the 1-based line of the problem when it is known
    """
    source = str(config_path)
    try:
        text = Path(config_path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}", source=source)

    config = load_experiment_from_text(text, source=source, base_dir=Path(config_path).parent)
    logger.info(f"Loaded experiment '{config.name}' from {config_path}")
    return config


def load_experiment_from_text(
    text: str,
    source: Optional[str] = None,
    base_dir: Optional[Path] = None,
) -> ExperimentConfig:
    """Parse and validate a YAML config document."""
    try:
        data = yaml.safe_load(text)
        root = yaml.compose(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigError(f"invalid YAML: {problem}", line=line, source=source)

    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping of keys to values", line=1, source=source)

    key_lines = _key_lines(root)
    unknown = sorted(set(data) - set(ExperimentConfig.model_fields))
    if unknown:
        key = unknown[0]
        raise ConfigError(f"unknown key '{key}'", line=key_lines.get(key), source=source)

    data = _parse_experiment_config(data, base_dir)
    try:
        return ExperimentConfig(**data)
    except ValidationError as e:
        error = e.errors()[0]
        loc = error.get("loc") or ()
        key = str(loc[0]) if loc else None
        field = f"{key}: " if key else ""
        raise ConfigError(f"{field}{error['msg']}", line=key_lines.get(key), source=source)


def _parse_experiment_config(data: dict[str, Any], base_dir: Optional[Path]) -> dict[str, Any]:
    """Resolve paths and apply environment overrides."""
    data = dict(data)
    if base_dir is not None:
        for key in ("opponent_file", "cloud_file"):
            if data.get(key):
                path = Path(os.path.expandvars(str(data[key]))).expanduser()
                data[key] = path if path.is_absolute() else base_dir / path

    override = os.environ.get(OUTPUT_DIR_ENV)
    if override:
        data["output_dir"] = Path(override).expanduser()
    return data


def _key_lines(root: Optional[yaml.Node]) -> dict[str, int]:
    """1-based line of every top-level key of a composed mapping."""
    if not isinstance(root, yaml.MappingNode):
        return {}
    return {
        str(key.value): key.start_mark.line + 1
        for key, _ in root.value
        if isinstance(key, yaml.ScalarNode)
    }


def save_experiment_to_yaml(config: ExperimentConfig, config_path: Path) -> None:
    """
    Save an experiment configuration to a YAML file.

    Args:
        config: The configuration to write
        config_path: Path to write the YAML file
    """
    config_path.parent.mkdir(parents=True, exist_ok=True)
    with open(config_path, "w", encoding="utf-8") as f:
        yaml.safe_dump(config.to_flat_dict(), f, default_flow_style=None, sort_keys=False)
    logger.info(f"Saved experiment '{config.name}' to {config_path}")


def load_cloud(path: Path) -> list[tuple[float, float]]:
    """
    Read a 2-D point cloud, one "x1, x2" pair per line.

    Blank lines and lines starting with '#' are skipped.

    Raises:
        ConfigError: With the line number of a malformed pair
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read point cloud: {e}", source=str(path))

    points: list[tuple[float, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace(",", " ").split()
        try:
            values = [float(p) for p in parts]
        except ValueError:
            values = []
        if len(values) != 2:
            raise ConfigError(f"expected an 'x1, x2' pair, got {line!r}", line=lineno, source=str(path))
        points.append((values[0], values[1]))
    return points


# Example configuration template
EXAMPLE_CONFIG = """# altgda experiment configuration
#
# A flat mapping. Vectors are YAML lists or comma-separated strings; matrix
# rows are lists or semicolon-separated strings ("1, 0; 0, 2").

name: fig1

# Game: agent 1 receives <x1, A x2>, agent 2 its negation
matrix: "1"
eta1: 0.5
eta2: 0.5
x1_0: "35"
x2_0: "35"

# alt | sim | continuous | alt_vs_opponent
mode: alt
iterations: 125

# alt_vs_opponent only: stage2 | constant | zero | scripted | random
# opponent: constant
# opponent_value: "1"
# opponent_file: moves.txt
# opponent_seed: 0

# Regret comparator for the metrics CSV (defaults to zero)
comparator: "0"

# Recurrence radius (defaults to 1% of the initial state norm)
# epsilon: 0.5

# Continuous mode
# t_end: 10
# substep: 0.001

# Point cloud for volume tracking (1x1 games only)
# cloud: "0, 0; 1, 0; 1, 1; 0, 1"
# cloud_file: cat.txt
# snapshot_every: 4

output_dir: output
svg: false
"""


def write_example_config(config_path: Path) -> None:
    """Write an example configuration file."""
    config_path.parent.mkdir(parents=True, exist_ok=True)
    with open(config_path, "w", encoding="utf-8") as f:
        f.write(EXAMPLE_CONFIG)
    logger.info(f"Wrote example experiment configuration to {config_path}")
