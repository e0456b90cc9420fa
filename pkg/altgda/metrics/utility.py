"""Cumulative utilities of simultaneous and alternating play."""

import numpy as np

from ..errors import MissingHalfStatesError, WrongModeError
from ..models import DynamicsMode, Trajectory

ALTERNATING_MODES = (DynamicsMode.ALT, DynamicsMode.ALT_VS_OPPONENT)


def require_mode(traj: Trajectory, *modes: DynamicsMode, operation: str) -> None:
    if traj.mode not in modes:
        expected = ", ".join(m.value for m in modes)
        raise WrongModeError(f"{operation} needs a {expected} trajectory, got {traj.mode.value}")


def alternating_rounds(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """
    Row indices (Full(t), Half(t)) of every recorded round.

    Raises:
        MissingHalfStatesError: If the trajectory's dynamic records no Half states
    """
    if traj.mode not in ALTERNATING_MODES:
        raise MissingHalfStatesError(
            f"{traj.mode.value} trajectories record no Half states (agent 1's x₁ᵗ⁺¹)"
        )
    half_rows = np.flatnonzero(traj.half)
    return half_rows - 1, half_rows


def payoff_series(traj: Trajectory, rows: np.ndarray) -> np.ndarray:
    """⟨x₁, A x₂⟩ at the given rows."""
    return np.einsum("ij,ij->i", traj.x1[rows], traj.x2[rows] @ traj.game.A.T)


def alternating_utility_terms(traj: Trajectory) -> np.ndarray:
    """⟨x₁ᵗ⁺¹ + x₁ᵗ, A x₂ᵗ⟩ for every recorded round t."""
    before, half = alternating_rounds(traj)
    grad = traj.x2[before] @ traj.game.A.T
    return np.einsum("ij,ij->i", traj.x1[half] + traj.x1[before], grad)


def cumulative_utility_sim(traj: Trajectory) -> float:
    """Σₜ ⟨x₁ᵗ, A x₂ᵗ⟩ over every recorded Full state of a simultaneous run."""
    require_mode(traj, DynamicsMode.SIM, operation="cumulative_utility_sim")
    return float(np.sum(payoff_series(traj, np.arange(len(traj)))))


def cumulative_utility_alt(traj: Trajectory) -> float:
    """
    Σₜ ⟨x₁ᵗ⁺¹ + x₁ᵗ, A x₂ᵗ⟩ over every recorded round of an alternating run.

    Agent 1 faces each x₂ᵗ twice, once before and once after her own update. A
    rollout of T rounds sums t = 0..T−1; an alternating run with no rounds has
    utility 0.
    """
    return float(np.sum(alternating_utility_terms(traj)))


def cumulative_utility_series(traj: Trajectory) -> np.ndarray:
    """
    Running cumulative utility aligned with the Full states of `traj`.

    Simultaneous runs include the payoff of the current state; alternating runs
    count the rounds completed so far (0 at t = 0).
    """
    if traj.mode == DynamicsMode.SIM:
        return np.cumsum(payoff_series(traj, np.arange(len(traj))))
    terms = alternating_utility_terms(traj)
    return np.concatenate([[0.0], np.cumsum(terms)])
