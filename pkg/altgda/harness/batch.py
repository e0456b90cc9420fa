"""Batch mode - run independent experiment configs concurrently."""

import asyncio
import logging
from pathlib import Path
from typing import Optional, Sequence

from ..errors import ConfigError
from ..models import ExperimentConfig, RunStatus
from .config_loader import load_experiment_from_yaml
from .runner import ExperimentRunner, RunResult

logger = logging.getLogger(__name__)


class BatchRunner:
    """
    Runs many configs with at most `max_concurrent_jobs` in flight.

    Each config runs in a worker thread with its own output directory; runs
    share no mutable state. Configs that fail to load are reported as
    CONFIG_ERROR results instead of aborting the batch.

    Usage:
        batch = BatchRunner(max_concurrent_jobs=4)
        results = await batch.run_paths([Path("a.yaml"), Path("b.yaml")])
    """

    def __init__(
        self,
        runner: Optional[ExperimentRunner] = None,
        max_concurrent_jobs: int = 1,
    ):
        if max_concurrent_jobs < 1:
            raise ValueError(f"max_concurrent_jobs must be at least 1, got {max_concurrent_jobs}")
        self.runner = runner or ExperimentRunner()
        self.max_concurrent_jobs = max_concurrent_jobs
        self._semaphore = asyncio.Semaphore(max_concurrent_jobs)
        self._lock = asyncio.Lock()
        self._active: set[str] = set()

    @property
    def active_runs(self) -> set[str]:
        return set(self._active)

    async def run_configs(self, configs: Sequence[ExperimentConfig]) -> list[RunResult]:
        """Run every config; results come back in input order."""
        names = self._unique_names(configs)
        configs = [c.model_copy(update={"name": n}) for c, n in zip(configs, names)]
        logger.info(f"Starting batch of {len(configs)} runs ({self.max_concurrent_jobs} concurrent)")
        results = await asyncio.gather(*(self._run_one(c) for c in configs))
        failed = sum(1 for r in results if r.status != RunStatus.COMPLETED)
        logger.info(f"Batch finished: {len(results) - failed} completed, {failed} not completed")
        return list(results)

    async def run_paths(self, paths: Sequence[Path]) -> list[RunResult]:
        """Load and run YAML configs; load failures become CONFIG_ERROR results."""
        loaded: list[Optional[ExperimentConfig]] = []
        errors: dict[int, RunResult] = {}
        for i, path in enumerate(paths):
            try:
                loaded.append(load_experiment_from_yaml(Path(path)))
            except ConfigError as e:
                logger.error(f"Skipping {path}: {e}")
                loaded.append(None)
                errors[i] = RunResult(
                    name=Path(path).stem, command="run", status=RunStatus.CONFIG_ERROR, error=str(e)
                )

        ran = iter(await self.run_configs([c for c in loaded if c is not None]))
        return [errors[i] if c is None else next(ran) for i, c in enumerate(loaded)]

    async def _run_one(self, config: ExperimentConfig) -> RunResult:
        async with self._semaphore:
            async with self._lock:
                self._active.add(config.name)
            try:
                return await asyncio.to_thread(self.runner.run, config)
            finally:
                async with self._lock:
                    self._active.discard(config.name)

    @staticmethod
    def _unique_names(configs: Sequence[ExperimentConfig]) -> list[str]:
        """Suffix repeated run names so every run gets its own output directory."""
        seen: dict[str, int] = {}
        names = []
        for config in configs:
            count = seen.get(config.name, 0)
            seen[config.name] = count + 1
            names.append(config.name if count == 0 else f"{config.name}_{count + 1}")
        return names
