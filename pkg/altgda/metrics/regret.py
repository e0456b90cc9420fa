"""Agent 1's regret against a fixed comparator strategy.

Regret is reported unsigned as defined: positive means the fixed strategy
would have earned more than the strategies actually played. No averaging by
the horizon is applied.
"""

from typing import Any, Optional
import logging

import numpy as np

from ..errors import DimensionMismatchError
from ..models import DynamicsMode, GameInstance, RegretReport, Trajectory, as_vector
from .utility import (
    ALTERNATING_MODES,
    alternating_rounds,
    alternating_utility_terms,
    payoff_series,
    require_mode,
)

logger = logging.getLogger(__name__)

REGRET_RTOL = 1e-9


def _comparator(game: GameInstance, x1_fixed: Any) -> np.ndarray:
    x = as_vector(x1_fixed, "x1_fixed")
    if x.shape[0] != game.matrix.rows:
        raise DimensionMismatchError(
            f"comparator has length {x.shape[0]}, payoff matrix has {game.matrix.rows} rows"
        )
    return x


def regret_alt_summed(traj: Trajectory, x1_fixed: Any) -> float:
    """
    ⟨2x₁, Σₜ A x₂ᵗ⟩ − Σₜ ⟨x₁ᵗ⁺¹ + x₁ᵗ, A x₂ᵗ⟩ over every recorded round.

    Raises:
        MissingHalfStatesError: If agent 1's Stage 1 updates were not recorded
    """
    alternating_rounds(traj)
    return float(regret_series(traj, x1_fixed)[-1])


def regret_sim_summed(traj: Trajectory, x1_fixed: Any) -> float:
    """⟨x₁, Σₜ A x₂ᵗ⟩ − Σₜ ⟨x₁ᵗ, A x₂ᵗ⟩ over every Full state of a simultaneous run."""
    require_mode(traj, DynamicsMode.SIM, operation="regret_sim_summed")
    return float(regret_series(traj, x1_fixed)[-1])


def regret_series(traj: Trajectory, x1_fixed: Any) -> np.ndarray:
    """
    Summed regret at every intermediate horizon, aligned with the Full states.

    For alternating runs entry t covers the t rounds completed at Full(t)
    (so entry 0 is 0); for simultaneous runs entry t covers Full states 0..t.
    """
    x = _comparator(traj.game, x1_fixed)
    A = traj.game.A
    if traj.mode == DynamicsMode.SIM:
        rows = np.arange(len(traj))
        comparator_terms = (traj.x2[rows] @ A.T) @ x
        return np.cumsum(comparator_terms) - np.cumsum(payoff_series(traj, rows))

    before, _ = alternating_rounds(traj)
    comparator_terms = (traj.x2[before] @ A.T) @ (2.0 * x)
    played = alternating_utility_terms(traj)
    return np.concatenate([[0.0], np.cumsum(comparator_terms) - np.cumsum(played)])


def regret_alt_closed_form(
    game: GameInstance, x1_fixed: Any, x1_first: Any, x1_last: Any
) -> float:
    """
    (⟨2x₁ − x₁ᵀ⁺¹, x₁ᵀ⁺¹⟩ − ⟨2x₁ − x₁⁰, x₁⁰⟩) / η₁.

    Depends only on agent 1's first and last strategies, not on A or the opponent.
    """
    x = _comparator(game, x1_fixed)
    first = as_vector(x1_first, "x1_first")
    last = as_vector(x1_last, "x1_last")
    return float(((2.0 * x - last) @ last - (2.0 * x - first) @ first) / game.eta1)


def regret_bound(game: GameInstance, x1_fixed: Any, x1_first: Any) -> float:
    """(⟨x₁⁰ − 2x₁, x₁⁰⟩ + ‖x₁‖²) / η₁, the horizon-independent bound."""
    x = _comparator(game, x1_fixed)
    first = as_vector(x1_first, "x1_first")
    return float(((first - 2.0 * x) @ first + x @ x) / game.eta1)


def regret_tolerance(game: GameInstance, bound: float, x1_last: Optional[np.ndarray] = None) -> float:
    """
    Absolute tolerance for regret comparisons.

    REGRET_RTOL times max(1, weighted energy at t = 0, |bound|, ‖x₁ᵀ⁺¹‖²/η₁).
    """
    s0 = game.initial
    scale = max(1.0, float(s0.x1 @ s0.x1) / game.eta1 + float(s0.x2 @ s0.x2) / game.eta2, abs(bound))
    if x1_last is not None:
        scale = max(scale, float(x1_last @ x1_last) / game.eta1)
    return REGRET_RTOL * scale


def regret_report(traj: Trajectory, x1_fixed: Any) -> RegretReport:
    """
    Summed regret, closed form and bound of an alternating run.

    The closed form uses the first and last agent-1 strategies recorded.
    """
    require_mode(traj, *ALTERNATING_MODES, operation="regret_report")
    game = traj.game
    x = _comparator(game, x1_fixed)
    first = traj.x1[0]
    last = traj.x1[-1]
    summed = regret_alt_summed(traj, x)
    closed = regret_alt_closed_form(game, x, first, last)
    bound = regret_bound(game, x, first)
    report = RegretReport(
        fixed_strategy=x.tolist(),
        summed_regret=summed,
        closed_form_regret=closed,
        bound=bound,
        horizon=traj.horizon,
        tolerance=regret_tolerance(game, bound, last),
    )
    logger.debug(
        f"regret over {report.horizon} rounds: summed={summed:.6g}, "
        f"closed={closed:.6g}, bound={bound:.6g}"
    )
    return report
