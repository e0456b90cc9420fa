"""Configuration, persistence, figure presets and the command-line harness."""

from .config_loader import (
    load_experiment_from_yaml,
    load_experiment_from_text,
    save_experiment_to_yaml,
    load_cloud,
    write_example_config,
    EXAMPLE_CONFIG,
)
from .presets import FigurePreset, PRESETS, get_preset, cat_cloud
from .storage import (
    METRICS_COLUMNS,
    write_trajectory_csv,
    read_trajectory_csv,
    write_metrics_csv,
    write_columns_csv,
    read_columns_csv,
    write_json_report,
    read_json_report,
)
from .runner import ExperimentRunner, RunResult
from .batch import BatchRunner

__all__ = [
    "load_experiment_from_yaml",
    "load_experiment_from_text",
    "save_experiment_to_yaml",
    "load_cloud",
    "write_example_config",
    "EXAMPLE_CONFIG",
    "FigurePreset",
    "PRESETS",
    "get_preset",
    "cat_cloud",
    "METRICS_COLUMNS",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "write_metrics_csv",
    "write_columns_csv",
    "read_columns_csv",
    "write_json_report",
    "read_json_report",
    "ExperimentRunner",
    "RunResult",
    "BatchRunner",
]
