"""Update rules - simultaneous and alternating gradient descent-ascent.

Every update goes through the two array kernels below so that the arithmetic
order (gradient product first, then the scaled add) is identical in single
steps, stage compositions, rollouts and opponent rules.
"""

import numpy as np

from ..errors import StageError
from ..models import GameInstance, JointState, Stage, check_dimensions


def ascent_update(A: np.ndarray, eta1: float, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Agent 1's move x₁ + η₁·A x₂."""
    return x1 + eta1 * (A @ x2)


def descent_update(A: np.ndarray, eta2: float, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Agent 2's move x₂ − η₂·Aᵀ x₁."""
    return x2 - eta2 * (A.T @ x1)


def _require_stage(s: JointState, stage: Stage, operation: str) -> None:
    if s.stage != stage:
        raise StageError(f"{operation} needs a {stage.value} state, got {s.stage.value} at t={s.t}")


def sim_gd_step(game: GameInstance, s: JointState) -> JointState:
    """One simultaneous round: both agents read the old state."""
    _require_stage(s, Stage.FULL, "sim_gd_step")
    check_dimensions(game.matrix, s)
    x1 = ascent_update(game.A, game.eta1, s.x1, s.x2)
    x2 = descent_update(game.A, game.eta2, s.x1, s.x2)
    return JointState.trusted(x1, x2, s.t + 1, Stage.FULL)


def alt_gd_stage1(game: GameInstance, s: JointState) -> JointState:
    """Agent 1 moves first: (x₁ᵗ, x₂ᵗ) → (x₁ᵗ⁺¹, x₂ᵗ) at Half."""
    _require_stage(s, Stage.FULL, "alt_gd_stage1")
    check_dimensions(game.matrix, s)
    x1 = ascent_update(game.A, game.eta1, s.x1, s.x2)
    return JointState.trusted(x1, s.x2, s.t, Stage.HALF)


def alt_gd_stage2(game: GameInstance, s: JointState) -> JointState:
    """Agent 2 answers the half-iterate: (x₁ᵗ⁺¹, x₂ᵗ) → (x₁ᵗ⁺¹, x₂ᵗ⁺¹)."""
    _require_stage(s, Stage.HALF, "alt_gd_stage2")
    check_dimensions(game.matrix, s)
    x2 = descent_update(game.A, game.eta2, s.x1, s.x2)
    return JointState.trusted(s.x1, x2, s.t + 1, Stage.FULL)


def alt_gd_step(game: GameInstance, s: JointState) -> JointState:
    """One alternating round, Stage 2 ∘ Stage 1."""
    return alt_gd_stage2(game, alt_gd_stage1(game, s))


# -------------------------------------------------------------------------
# Inverses (each stage is a shear, hence injective)
# -------------------------------------------------------------------------


def alt_gd_stage1_inverse(game: GameInstance, s: JointState) -> JointState:
    """Undo Stage 1: Half (x₁ᵗ⁺¹, x₂ᵗ) → Full (x₁ᵗ, x₂ᵗ)."""
    _require_stage(s, Stage.HALF, "alt_gd_stage1_inverse")
    check_dimensions(game.matrix, s)
    x1 = s.x1 - game.eta1 * (game.A @ s.x2)
    return JointState.trusted(x1, s.x2, s.t, Stage.FULL)


def alt_gd_stage2_inverse(game: GameInstance, s: JointState) -> JointState:
    """Undo Stage 2: Full (x₁ᵗ⁺¹, x₂ᵗ⁺¹) → Half (x₁ᵗ⁺¹, x₂ᵗ)."""
    _require_stage(s, Stage.FULL, "alt_gd_stage2_inverse")
    if s.t < 1:
        raise StageError("cannot step back from t = 0")
    check_dimensions(game.matrix, s)
    x2 = s.x2 + game.eta2 * (game.A.T @ s.x1)
    return JointState.trusted(s.x1, x2, s.t - 1, Stage.HALF)


def alt_gd_inverse_step(game: GameInstance, s: JointState) -> JointState:
    """One alternating round backwards in time."""
    return alt_gd_stage1_inverse(game, alt_gd_stage2_inverse(game, s))
