"""Jacobians of the update maps and volume tracking of point clouds."""

from typing import Any
import logging

import numpy as np

from ..engine.updates import alt_gd_inverse_step, alt_gd_step
from ..errors import DimensionMismatchError, WrongModeError
from ..models import DynamicsMode, GameInstance, JointState, VolumeTrack
from ..numerics import SquareMatrix, hull_area_2d

logger = logging.getLogger(__name__)


def _blocks(game: GameInstance) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    k1, k2 = game.matrix.shape
    return np.eye(k1), np.eye(k2), np.zeros((k1, k2)), np.zeros((k2, k1))


def jacobian_stage1(game: GameInstance) -> SquareMatrix:
    """[[I, η₁A], [0, I]]: agent 1's shear."""
    i1, i2, _, z21 = _blocks(game)
    return SquareMatrix(entries=np.block([[i1, game.eta1 * game.A], [z21, i2]]))


def jacobian_stage2(game: GameInstance) -> SquareMatrix:
    """[[I, 0], [−η₂Aᵀ, I]]: agent 2's shear."""
    i1, i2, z12, _ = _blocks(game)
    return SquareMatrix(entries=np.block([[i1, z12], [-game.eta2 * game.A.T, i2]]))


def jacobian_altgd(game: GameInstance) -> SquareMatrix:
    """Jacobian of one alternating round, J₂·J₁ (determinant 1)."""
    return jacobian_stage2(game) @ jacobian_stage1(game)


def jacobian_simgd(game: GameInstance) -> SquareMatrix:
    """[[I, η₁A], [−η₂Aᵀ, I]], with determinant det(I + η₁η₂AᵀA)."""
    i1, i2, _, _ = _blocks(game)
    return SquareMatrix(
        entries=np.block([[i1, game.eta1 * game.A], [-game.eta2 * game.A.T, i2]])
    )


def _step_maps(game: GameInstance, mode: DynamicsMode) -> list[np.ndarray]:
    mode = DynamicsMode(mode)
    if mode == DynamicsMode.ALT:
        return [jacobian_stage1(game).entries, jacobian_stage2(game).entries]
    if mode == DynamicsMode.SIM:
        return [jacobian_simgd(game).entries]
    raise WrongModeError(f"volume tracking supports alt and sim, got {mode.value}")


def volume_track(
    game: GameInstance,
    cloud: Any,
    mode: DynamicsMode,
    n_steps: int,
    snapshot_every: int = 1,
) -> VolumeTrack:
    """
    Push a 2-D point cloud through n_steps rounds and record its hull area.

    Every point is mapped by the (linear) update of the chosen dynamic; the
    alternating round applies the two stage shears in order. Areas and clouds
    are recorded at step 0, every `snapshot_every` steps and at n_steps.

    Raises:
        DimensionMismatchError: Unless the game is 1×1 and the cloud is (N, 2)
        WrongModeError: For dynamics other than alt and sim
    """
    if game.matrix.shape != (1, 1):
        raise DimensionMismatchError(
            f"volume tracking needs a 1x1 game, got {game.matrix.rows}x{game.matrix.cols}"
        )
    points = np.asarray(cloud, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2:
        raise DimensionMismatchError(f"point cloud must have shape (N, 2), got {points.shape}")
    if n_steps < 0 or snapshot_every < 1:
        raise ValueError("n_steps must be ≥ 0 and snapshot_every ≥ 1")

    maps = _step_maps(game, mode)
    first = hull_area_2d(points)
    if first.degenerate:
        logger.warning("point cloud has a degenerate hull; areas stay 0")

    steps, areas, clouds = [0], [first.area], [points.copy()]
    for step in range(1, n_steps + 1):
        for J in maps:
            points = points @ J.T
        if step % snapshot_every == 0 or step == n_steps:
            steps.append(step)
            areas.append(hull_area_2d(points).area)
            clouds.append(points.copy())

    logger.debug(f"volume track ({DynamicsMode(mode).value}): {len(steps)} snapshots")
    return VolumeTrack(
        steps=np.array(steps),
        areas=np.array(areas),
        clouds=clouds,
        degenerate=first.degenerate,
    )


def check_injectivity(game: GameInstance, s: JointState, rtol: float = 1e-9) -> bool:
    """
    Stepping an alternating round forward and back returns `s`.

    Each stage is a shear with an explicit inverse, so the round is injective;
    this verifies it numerically at one state.
    """
    back = alt_gd_inverse_step(game, alt_gd_step(game, s))
    scale = max(1.0, float(np.max(np.abs(s.concatenated))))
    return bool(np.max(np.abs(back.concatenated - s.concatenated)) <= rtol * scale)
