"""Experiment runner - executes configured experiments and writes their artifacts."""

from pathlib import Path
from typing import Any, Callable, Optional, Sequence
import logging

import numpy as np
from pydantic import BaseModel, Field

from ..analysis import (
    check_orbit_bounds,
    conic_classify_1d,
    recurrence_scan,
    rotation_angle_2d,
    rotation_period,
    stepsize_safety,
    volume_track,
)
from ..engine import continuous_reference, rollout, rollout_vs_opponent
from ..errors import (
    AltGDAError,
    ConfigError,
    DimensionMismatchError,
    DivergenceError,
    InvariantViolation,
    MissingHalfStatesError,
    WrongModeError,
    EXIT_CONFIG,
    EXIT_DIVERGED,
    EXIT_INVARIANT,
    EXIT_OK,
)
from ..metrics import (
    cumulative_utility_series,
    energy_identity_residuals,
    perturbed_energy_series,
    regret_alt_closed_form,
    regret_bound,
    regret_report,
    regret_series,
    regret_tolerance,
    weighted_energy_series,
)
from ..models import DynamicsMode, ExperimentConfig, RunStatus, Trajectory, as_vector
from ..opponents import OpponentRegistry, default_registry
from .config_loader import load_cloud
from .presets import get_preset
from .storage import (
    read_trajectory_csv,
    write_columns_csv,
    write_json_report,
    write_metrics_csv,
    write_trajectory_csv,
)
from .svg import PointSeries, write_scatter_svg

logger = logging.getLogger(__name__)

VOLUME_RTOL = 1e-9
ENERGY_DRIFT_RTOL = 1e-6

_EXIT_CODES = {
    RunStatus.COMPLETED: EXIT_OK,
    RunStatus.CONFIG_ERROR: EXIT_CONFIG,
    RunStatus.DIVERGED: EXIT_DIVERGED,
    RunStatus.INVARIANT_FAILED: EXIT_INVARIANT,
    RunStatus.FAILED: 1,
}


class RunResult(BaseModel):
    """Outcome of one harness command on one experiment."""

    name: str
    command: str
    status: RunStatus = RunStatus.COMPLETED
    output_dir: Optional[Path] = None

    files: list[str] = Field(default_factory=list)
    """Written files, relative to output_dir."""

    summary: dict[str, Any] = Field(default_factory=dict)
    error: Optional[str] = None

    @property
    def exit_code(self) -> int:
        return _EXIT_CODES[self.status]

    def add_file(self, path: Optional[Path]) -> None:
        if path is None:
            return
        try:
            self.files.append(str(path.relative_to(self.output_dir)))
        except ValueError:
            self.files.append(str(path))


Body = Callable[[RunResult, Path], None]


class ExperimentRunner:
    """
    Runs harness commands on experiment configs.

    Every command writes into `<output root>/<config name>/` and returns a
    RunResult; failures are caught at the command boundary, logged, and turned
    into a status. A diverged rollout still writes the partial trajectory.

    Usage:
        runner = ExperimentRunner()
        result = runner.run(load_experiment_from_yaml(Path("config/fig1.yaml")))
        sys.exit(result.exit_code)
    """

    def __init__(
        self,
        output_root: Optional[Path] = None,
        registry: Optional[OpponentRegistry] = None,
    ):
        self.output_root = Path(output_root) if output_root else None
        self.registry = registry or default_registry()

    def output_dir_for(self, config: ExperimentConfig) -> Path:
        root = self.output_root if self.output_root else config.output_dir
        return root / config.name

    # -------------------------------------------------------------------------
    # Trajectories and metrics
    # -------------------------------------------------------------------------

    def trajectory(self, config: ExperimentConfig) -> Trajectory:
        """Roll out the dynamic the config names."""
        game = config.to_game()
        mode = config.mode
        if mode == DynamicsMode.ALT_VS_OPPONENT:
            opponent = self.registry.from_experiment(config, game)
            return rollout_vs_opponent(game, opponent, config.iterations)
        if mode == DynamicsMode.CONTINUOUS:
            t_end = config.t_end if config.t_end is not None else float(config.iterations)
            return continuous_reference(game, t_end, h=config.substep)
        return rollout(game, mode, config.iterations)

    @staticmethod
    def comparator(config: ExperimentConfig) -> np.ndarray:
        if config.comparator is not None:
            return as_vector(config.comparator, "comparator")
        return np.zeros(config.matrix.rows)

    def metrics_table(self, traj: Trajectory, comparator: np.ndarray) -> dict[str, np.ndarray]:
        """Per-Full-state metrics; utility and regret are NaN for continuous runs."""
        rows = np.flatnonzero(traj.full_mask)
        table = {
            "t": traj.t[rows],
            "perturbed_energy": perturbed_energy_series(traj),
            "weighted_energy": weighted_energy_series(traj, rows),
        }
        if traj.mode == DynamicsMode.CONTINUOUS:
            table["cum_utility"] = np.full(rows.shape[0], np.nan)
            table["regret_vs_comparator"] = np.full(rows.shape[0], np.nan)
        else:
            table["cum_utility"] = cumulative_utility_series(traj)
            table["regret_vs_comparator"] = regret_series(traj, comparator)
        return table

    def recompute_metrics(self, trajectory_csv: Path, config: ExperimentConfig) -> dict[str, np.ndarray]:
        """Re-ingest a written trajectory and recompute its metrics table."""
        traj = read_trajectory_csv(trajectory_csv, config.to_game(), config.mode)
        return self.metrics_table(traj, self.comparator(config))

    def _write_trajectory_outputs(
        self, result: RunResult, out: Path, traj: Trajectory, config: ExperimentConfig
    ) -> None:
        result.add_file(write_trajectory_csv(traj, out / "trajectory.csv"))
        metrics = self.metrics_table(traj, self.comparator(config))
        result.add_file(write_metrics_csv(out / "metrics.csv", metrics))
        result.summary["entries"] = len(traj)
        result.summary["horizon"] = traj.horizon

    def _write_trajectory_svg(
        self, result: RunResult, out: Path, traj: Trajectory, config: ExperimentConfig, level_sets=()
    ) -> None:
        if not config.svg or traj.game.matrix.shape != (1, 1):
            return
        series = [
            PointSeries(
                label="(x1^t, x2^t)",
                points=np.hstack([traj.full_x1(), traj.full_x2()]),
                marker="^",
                connect=True,
            )
        ]
        if traj.has_half_states:
            series.append(
                PointSeries(label="(x1^{t+1}, x2^t)", points=np.hstack([traj.half_x1(), traj.half_x2()]))
            )
        result.add_file(
            write_scatter_svg(out / "trajectory.svg", series, title=config.name, level_sets=level_sets)
        )

    # -------------------------------------------------------------------------
    # Command boundary
    # -------------------------------------------------------------------------

    def _execute(self, command: str, config: ExperimentConfig, body: Body) -> RunResult:
        out = self.output_dir_for(config)
        result = RunResult(name=config.name, command=command, output_dir=out)
        logger.info(f"Running '{command}' for '{config.name}' -> {out}")

        try:
            body(result, out)
        except DivergenceError as e:
            result.status = RunStatus.DIVERGED
            result.error = str(e)
            result.summary["diverged_at_step"] = e.step
            logger.error(f"'{config.name}' diverged: {e}")
            if e.partial is not None:
                self._write_trajectory_outputs(result, out, e.partial, config)
        except (ConfigError, WrongModeError, MissingHalfStatesError, DimensionMismatchError) as e:
            result.status = RunStatus.CONFIG_ERROR
            result.error = str(e)
            logger.error(f"'{command}' cannot run on '{config.name}': {e}")
        except InvariantViolation as e:
            result.status = RunStatus.INVARIANT_FAILED
            result.error = str(e)
            logger.error(f"Invariant check failed for '{config.name}': {e}")
        except (AltGDAError, OSError, ValueError) as e:
            result.status = RunStatus.FAILED
            result.error = str(e)
            logger.error(f"'{command}' failed for '{config.name}': {e}")

        summary_path = out / f"{command}_summary.json"
        write_json_report(summary_path, result.model_dump(mode="json", exclude={"output_dir"}))
        logger.info(f"'{command}' for '{config.name}' finished: {result.status.value}")
        return result

    # -------------------------------------------------------------------------
    # Commands
    # -------------------------------------------------------------------------

    def simulate(self, config: ExperimentConfig) -> RunResult:
        """Roll out and write trajectory.csv and metrics.csv."""

        def body(result: RunResult, out: Path) -> None:
            traj = self.trajectory(config)
            self._write_trajectory_outputs(result, out, traj, config)
            self._write_trajectory_svg(result, out, traj, config)
            result.summary["final_state"] = {
                "x1": traj.final.x1.tolist(),
                "x2": traj.final.x2.tolist(),
            }

        return self._execute("simulate", config, body)

    def run(self, config: ExperimentConfig) -> RunResult:
        """
        Full run: trajectory and metrics CSVs plus a bounds/recurrence report.

        Alternating runs also check energy conservation, the orbit bounds and
        the regret identity against the configured comparator.
        """

        def body(result: RunResult, out: Path) -> None:
            traj = self.trajectory(config)
            self._write_trajectory_outputs(result, out, traj, config)
            self._write_trajectory_svg(result, out, traj, config)
            report: dict[str, Any] = {"name": config.name, "mode": config.mode.value}
            failures: list[str] = []

            if traj.mode in (DynamicsMode.ALT, DynamicsMode.ALT_VS_OPPONENT):
                regret = regret_report(traj, self.comparator(config))
                report["regret"] = regret.model_dump()
                if not (regret.agrees and regret.within_bound):
                    failures.append("regret identity or bound")

            if traj.mode == DynamicsMode.ALT:
                cert = stepsize_safety(traj.game)
                check = check_orbit_bounds(traj, cert)
                report["bounds"] = {
                    **cert.model_dump(),
                    "safe": cert.safe,
                    "all_passed": check.all_passed,
                    "vacuous": check.vacuous,
                    "max_half_weighted_energy": check.max_half_weighted_energy,
                }
                if not check.vacuous and not check.all_passed:
                    failures.append(f"orbit bounds at t={check.first_failure}")

                drift = energy_identity_residuals(traj).energy_drift
                report["perturbed_energy_drift"] = drift
                if cert.safe and drift > ENERGY_DRIFT_RTOL:
                    failures.append(f"perturbed energy drift {drift:.3e}")

                rec = recurrence_scan(traj, config.epsilon)
                report["recurrence"] = rec.model_dump()

            result.add_file(write_json_report(out / "report.json", report))
            result.summary.update({k: v for k, v in report.items() if k not in ("name", "mode")})
            if failures:
                raise InvariantViolation("; ".join(failures))

        return self._execute("run", config, body)

    def regret(self, config: ExperimentConfig, fixed: Optional[Sequence[float]] = None) -> RunResult:
        """Regret against `fixed` (default: the config's comparator) at every horizon."""
        x = as_vector(fixed, "fixed") if fixed is not None else self.comparator(config)

        def body(result: RunResult, out: Path) -> None:
            traj = self.trajectory(config)
            series = regret_series(traj, x)
            t = traj.t[traj.full_mask]

            if traj.mode == DynamicsMode.SIM:
                result.add_file(write_columns_csv(out / "regret.csv", {"t": t, "regret": series}))
                result.summary["sim_regret"] = float(series[-1])
                return

            game = traj.game
            first = traj.x1[0]
            lasts = traj.full_x1()
            closed = np.array([regret_alt_closed_form(game, x, first, last) for last in lasts])
            bound = regret_bound(game, x, first)
            result.add_file(
                write_columns_csv(
                    out / "regret.csv",
                    {"t": t, "regret": series, "closed_form": closed, "bound": np.full(t.shape, bound)},
                )
            )
            report = regret_report(traj, x)
            result.summary["regret"] = report.model_dump()
            largest = lasts[np.argmax(np.einsum("ij,ij->i", lasts, lasts))]
            tol = regret_tolerance(game, bound, largest)
            if np.any(np.abs(series - closed) > tol):
                raise InvariantViolation("summed and closed-form regret disagree")
            if np.any(np.maximum(series, closed) > bound + tol):
                raise InvariantViolation("regret exceeds its bound")

        return self._execute("regret", config, body)

    def invariants(self, config: ExperimentConfig) -> RunResult:
        """Per-round energy/payoff identities and perturbed energy drift."""

        def body(result: RunResult, out: Path) -> None:
            traj = self.trajectory(config)
            res = energy_identity_residuals(traj)
            result.add_file(
                write_columns_csv(
                    out / "residuals.csv",
                    {
                        "t": res.t,
                        "agent1_lhs": res.agent1_lhs,
                        "agent1_rhs": res.agent1_rhs,
                        "agent2_lhs": res.agent2_lhs,
                        "agent2_rhs": res.agent2_rhs,
                        "combined_lhs": res.combined_lhs,
                        "combined_rhs": res.combined_rhs,
                    },
                )
            )
            result.add_file(
                write_columns_csv(
                    out / "energy.csv",
                    {"t": traj.t[traj.full_mask], "perturbed_energy": res.perturbed_energy},
                )
            )
            result.summary["worst"] = res.worst()
            result.summary["agent2_applies"] = res.agent2_applies
            if not res.holds(drift_tolerance=ENERGY_DRIFT_RTOL):
                raise InvariantViolation(f"energy identities fail: {res.worst()}")

        return self._execute("invariants", config, body)

    def bounds(self, config: ExperimentConfig) -> RunResult:
        """Safety certificate and per-Full-state orbit bound check."""

        def body(result: RunResult, out: Path) -> None:
            game = config.to_game()
            cert = stepsize_safety(game)
            result.summary["certificate"] = {**cert.model_dump(), "safe": cert.safe}
            if game.matrix.shape == (1, 1):
                conic = conic_classify_1d(float(game.A[0, 0]), game.steps)
                result.summary["conic"] = conic.value

            traj = self.trajectory(config)
            check = check_orbit_bounds(traj, cert)
            rows = np.flatnonzero(traj.full_mask)
            result.add_file(
                write_columns_csv(
                    out / "bounds.csv",
                    {
                        "t": check.t,
                        "weighted_energy": weighted_energy_series(traj, rows),
                        "upper_ok": check.upper_ok.astype(int),
                        "lower_ok": check.lower_ok.astype(int),
                        "cap1_ok": check.cap1_ok.astype(int),
                        "cap2_ok": check.cap2_ok.astype(int),
                    },
                )
            )
            result.summary.update(
                all_passed=check.all_passed,
                vacuous=check.vacuous,
                warning=check.warning,
                max_half_weighted_energy=check.max_half_weighted_energy,
            )
            if not check.vacuous and not check.all_passed:
                raise InvariantViolation(f"orbit bounds fail at t={check.first_failure}")

        return self._execute("bounds", config, body)

    def recurrence(self, config: ExperimentConfig, epsilon: Optional[float] = None) -> RunResult:
        """Near-returns to the initial state."""

        def body(result: RunResult, out: Path) -> None:
            traj = self.trajectory(config)
            report = recurrence_scan(traj, epsilon if epsilon is not None else config.epsilon)
            result.summary["recurrence"] = report.model_dump()
            if traj.game.matrix.shape == (1, 1):
                try:
                    theta = rotation_angle_2d(traj.game)
                    result.summary["rotation_angle"] = theta
                    result.summary["rotation_period"] = rotation_period(theta)
                except ValueError as e:
                    result.summary["rotation_angle"] = None
                    logger.warning(f"No rotation angle for '{config.name}': {e}")
            result.add_file(write_json_report(out / "recurrence.json", result.summary))

        return self._execute("recurrence", config, body)

    def volume(self, config: ExperimentConfig, cloud_path: Optional[Path] = None) -> RunResult:
        """Hull area of a point cloud under the configured dynamic."""

        def body(result: RunResult, out: Path) -> None:
            if cloud_path is not None:
                cloud = load_cloud(cloud_path)
            elif config.cloud is not None:
                cloud = config.cloud
            elif config.cloud_file is not None:
                cloud = load_cloud(config.cloud_file)
            else:
                raise ConfigError("volume tracking needs a point cloud (--cloud, cloud or cloud_file)")

            track = volume_track(
                config.to_game(), cloud, config.mode, config.iterations, config.snapshot_every
            )
            result.add_file(write_columns_csv(out / "volume.csv", {"step": track.steps, "area": track.areas}))
            step_col = np.concatenate([np.full(c.shape[0], s) for s, c in zip(track.steps, track.clouds)])
            points = np.vstack(track.clouds)
            result.add_file(
                write_columns_csv(
                    out / "clouds.csv", {"step": step_col, "x1": points[:, 0], "x2": points[:, 1]}
                )
            )
            if config.svg:
                series = [
                    PointSeries(label=f"t={s}", points=c, marker=".")
                    for s, c in zip(track.steps, track.clouds)
                ]
                result.add_file(write_scatter_svg(out / "volume.svg", series, title=config.name))

            result.summary.update(
                areas=track.areas.tolist(),
                relative_drift=track.relative_drift,
                degenerate=track.degenerate,
            )
            if config.mode == DynamicsMode.ALT and track.relative_drift > VOLUME_RTOL:
                raise InvariantViolation(f"hull area drifts by {track.relative_drift:.3e}")

        return self._execute("volume", config, body)

    def figures(self, preset_name: str) -> list[RunResult]:
        """Run every experiment of a figure preset."""
        preset = get_preset(preset_name, self.output_root)
        logger.info(f"Reproducing {preset.name}: {preset.description}")
        results: list[RunResult] = []
        for config in preset.configs:
            if config.cloud is not None:
                results.append(self.volume(config))
                continue
            results.append(self._figure_trajectory(config, preset.level_sets))
            if preset.name == "fig1":
                results.append(self.regret(config))
        return results

    def _figure_trajectory(self, config: ExperimentConfig, level_sets) -> RunResult:
        def body(result: RunResult, out: Path) -> None:
            traj = self.trajectory(config)
            self._write_trajectory_outputs(result, out, traj, config)
            self._write_trajectory_svg(result, out, traj, config, level_sets)

        return self._execute("figure", config, body)
