"""Energy quantities and the per-step energy/payoff identities of alternating play."""

import numpy as np

from ..errors import StageError
from ..models import (
    DynamicsMode,
    GameInstance,
    JointState,
    EnergyIdentityResiduals,
    Stage,
    Trajectory,
    check_dimensions,
    payoff,
)
from .utility import alternating_rounds


def _require(s: JointState, stage: Stage, role: str) -> None:
    if s.stage != stage:
        raise StageError(f"{role} must be a {stage.value} state, got {s.stage.value} at t={s.t}")


def _sq(v: np.ndarray) -> float:
    return float(v @ v)


def weighted_energy(game: GameInstance, s: JointState) -> float:
    """‖x₁‖²/η₁ + ‖x₂‖²/η₂, conserved by the continuous flow only."""
    check_dimensions(game.matrix, s)
    return _sq(s.x1) / game.eta1 + _sq(s.x2) / game.eta2


def perturbed_energy(game: GameInstance, s: JointState) -> float:
    """‖x₁‖²/η₁ + ‖x₂‖²/η₂ + ⟨x₁, A x₂⟩, conserved along alternating Full states."""
    _require(s, Stage.FULL, "perturbed_energy state")
    return weighted_energy(game, s) + payoff(game, s)


def energy_delta_agent1(
    game: GameInstance, s_before: JointState, s_after_stage1: JointState
) -> tuple[float, float]:
    """
    Agent 1's identity for one Stage 1 update.

    Returns:
        (lhs, rhs) with lhs = (‖x₁ᵗ⁺¹‖² − ‖x₁ᵗ‖²)/η₁ and rhs = ⟨x₁ᵗ⁺¹ + x₁ᵗ, A x₂ᵗ⟩
    """
    _require(s_before, Stage.FULL, "s_before")
    _require(s_after_stage1, Stage.HALF, "s_after_stage1")
    check_dimensions(game.matrix, s_before)
    check_dimensions(game.matrix, s_after_stage1)
    lhs = (_sq(s_after_stage1.x1) - _sq(s_before.x1)) / game.eta1
    rhs = float((s_after_stage1.x1 + s_before.x1) @ (game.A @ s_before.x2))
    return lhs, rhs


def energy_delta_agent2(
    game: GameInstance, s_half: JointState, s_after: JointState
) -> tuple[float, float]:
    """
    Agent 2's identity for one Stage 2 update.

    Returns:
        (lhs, rhs) with lhs = (‖x₂ᵗ⁺¹‖² − ‖x₂ᵗ‖²)/η₂ and rhs = −⟨x₁ᵗ⁺¹, A(x₂ᵗ⁺¹ + x₂ᵗ)⟩
    """
    _require(s_half, Stage.HALF, "s_half")
    _require(s_after, Stage.FULL, "s_after")
    check_dimensions(game.matrix, s_half)
    check_dimensions(game.matrix, s_after)
    lhs = (_sq(s_after.x2) - _sq(s_half.x2)) / game.eta2
    rhs = -float(s_half.x1 @ (game.A @ (s_after.x2 + s_half.x2)))
    return lhs, rhs


def energy_step_identity(
    game: GameInstance, s_t: JointState, s_t1: JointState
) -> tuple[float, float]:
    """
    Both identities summed over one full alternating round.

    Returns:
        (lhs, rhs) with lhs the change of the weighted energy from s_t to s_t1
        and rhs = ⟨x₁ᵗ, A x₂ᵗ⟩ − ⟨x₁ᵗ⁺¹, A x₂ᵗ⁺¹⟩; equality is the conservation
        of the perturbed energy.
    """
    _require(s_t, Stage.FULL, "s_t")
    _require(s_t1, Stage.FULL, "s_t1")
    lhs = weighted_energy(game, s_t1) - weighted_energy(game, s_t)
    rhs = payoff(game, s_t) - payoff(game, s_t1)
    return lhs, rhs


# -------------------------------------------------------------------------
# Trajectory-wide series
# -------------------------------------------------------------------------


def weighted_energy_series(traj: Trajectory, rows: np.ndarray | None = None) -> np.ndarray:
    """Weighted energy at the given rows (all Full states by default)."""
    if rows is None:
        rows = np.flatnonzero(traj.full_mask)
    g = traj.game
    x1, x2 = traj.x1[rows], traj.x2[rows]
    return np.einsum("ij,ij->i", x1, x1) / g.eta1 + np.einsum("ij,ij->i", x2, x2) / g.eta2


def perturbed_energy_series(traj: Trajectory) -> np.ndarray:
    """Perturbed energy at every Full state."""
    rows = np.flatnonzero(traj.full_mask)
    coupling = np.einsum("ij,ij->i", traj.x1[rows], traj.x2[rows] @ traj.game.A.T)
    return weighted_energy_series(traj, rows) + coupling


def _relative(lhs: np.ndarray, rhs: np.ndarray, scale: np.ndarray) -> np.ndarray:
    return np.abs(lhs - rhs) / np.maximum(1.0, scale)


def energy_identity_residuals(traj: Trajectory) -> EnergyIdentityResiduals:
    """
    Evaluate both per-step identities and their sum for every round of `traj`.

    The agent-1 identity holds against any opponent; the agent-2 identity and
    energy conservation are only expected when agent 2 played Stage 2, which
    `agent2_applies` records.
    """
    g = traj.game
    A, eta1, eta2 = g.A, g.eta1, g.eta2
    before, half = alternating_rounds(traj)
    after = half + 1

    x1_b, x2_b = traj.x1[before], traj.x2[before]
    x1_h = traj.x1[half]
    x1_a, x2_a = traj.x1[after], traj.x2[after]

    def sq(m: np.ndarray) -> np.ndarray:
        return np.einsum("ij,ij->i", m, m)

    a1_lhs = (sq(x1_h) - sq(x1_b)) / eta1
    a1_rhs = np.einsum("ij,ij->i", x1_h + x1_b, x2_b @ A.T)
    a1_scale = (sq(x1_h) + sq(x1_b)) / eta1

    a2_lhs = (sq(x2_a) - sq(x2_b)) / eta2
    a2_rhs = -np.einsum("ij,ij->i", x1_h, (x2_a + x2_b) @ A.T)
    a2_scale = (sq(x2_a) + sq(x2_b)) / eta2

    w_b = sq(x1_b) / eta1 + sq(x2_b) / eta2
    w_a = sq(x1_a) / eta1 + sq(x2_a) / eta2
    c_lhs = w_a - w_b
    c_rhs = np.einsum("ij,ij->i", x1_b, x2_b @ A.T) - np.einsum("ij,ij->i", x1_a, x2_a @ A.T)

    return EnergyIdentityResiduals(
        t=traj.t[half].copy(),
        agent1_lhs=a1_lhs,
        agent1_rhs=a1_rhs,
        agent1_relative=_relative(a1_lhs, a1_rhs, a1_scale),
        agent2_lhs=a2_lhs,
        agent2_rhs=a2_rhs,
        agent2_relative=_relative(a2_lhs, a2_rhs, a2_scale),
        combined_lhs=c_lhs,
        combined_rhs=c_rhs,
        combined_relative=_relative(c_lhs, c_rhs, w_a + w_b),
        perturbed_energy=perturbed_energy_series(traj),
        agent2_applies=traj.mode == DynamicsMode.ALT,
    )
