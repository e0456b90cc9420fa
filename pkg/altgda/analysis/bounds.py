"""Step-size safety, conic classification of 1-D orbits and orbit bound checks."""

import math
import logging

import numpy as np

from ..models import (
    BoundsCertificate,
    ConicType,
    DynamicsMode,
    GameInstance,
    OrbitCheck,
    StepSizes,
    Trajectory,
    payoff,
)
from ..metrics.energy import weighted_energy, weighted_energy_series
from ..metrics.utility import require_mode
from ..numerics import spectral_norm

logger = logging.getLogger(__name__)

BOUND_RTOL = 1e-9
PARABOLA_TOL = 1e-12


def stepsize_safety(game: GameInstance) -> BoundsCertificate:
    """
    Safety margin 2/‖A‖ − √(η₁η₂) and the orbit bound constants of `game`.

    With c = √(η₁η₂)‖A‖/2 and W = ‖x₁‖²/η₁ + ‖x₂‖²/η₂, every Full state of an
    alternating run satisfies (1 − c)·W ≤ upper_rhs and (1 + c)·W ≥ lower_rhs
    when the margin is positive. The per-agent caps bound ‖xᵢ‖² alone and are
    infinite when the margin is not positive.

    Raises:
        ConvergenceError: If the spectral norm does not converge
    """
    norm = spectral_norm(game.matrix)
    g = game.steps.geometric_mean
    margin = 2.0 / norm - g if norm > 0 else math.inf
    c = g * norm / 2.0

    w0 = weighted_energy(game, game.initial)
    upper_rhs = payoff(game, game.initial) + w0
    lower_rhs = (1.0 - c) * w0

    caps = (math.inf, math.inf)
    if margin > 0:
        eta1, eta2 = game.eta1, game.eta2
        d1 = 1.0 / eta1 - math.sqrt(eta2 / eta1) * norm / 2.0
        d2 = 1.0 / eta2 - math.sqrt(eta1 / eta2) * norm / 2.0
        caps = (upper_rhs / d1, upper_rhs / d2)

    cert = BoundsCertificate(
        spectral_norm=norm,
        safety_margin=margin,
        upper_rhs=upper_rhs,
        lower_rhs=lower_rhs,
        upper_coefficient=1.0 - c,
        lower_coefficient=1.0 + c,
        per_agent_caps=caps,
    )
    logger.debug(f"‖A‖={norm:.6g}, margin={margin:.6g}, safe={cert.safe}")
    return cert


def conic_classify_1d(a: float, steps: StepSizes) -> ConicType:
    """
    Shape of the level set holding a 1-D alternating orbit for A = [a].

    Decided by the sign of a² − 4/(η₁η₂); values within 1e-12 (relative to the
    larger term) of zero are a parabola.
    """
    bound = 4.0 / (steps.eta1 * steps.eta2)
    disc = a * a - bound
    if abs(disc) <= PARABOLA_TOL * max(1.0, a * a, bound):
        return ConicType.PARABOLA
    return ConicType.ELLIPSE if disc < 0 else ConicType.HYPERBOLA


def conic_value_1d(a: float, steps: StepSizes, x1: float, x2: float) -> float:
    """x₁²/η₁ + x₂²/η₂ + a·x₁x₂, constant along a 1-D alternating orbit."""
    return x1 * x1 / steps.eta1 + x2 * x2 / steps.eta2 + a * x1 * x2


def check_orbit_bounds(traj: Trajectory, cert: BoundsCertificate) -> OrbitCheck:
    """
    Check the upper, lower and per-agent bounds at every Full state of an
    alternating run.

    Unsafe step sizes make the upper bound and caps vacuous: they are reported
    as passing and the result carries a warning. The largest weighted energy over
    Half states is recorded as an observation only.
    """
    require_mode(traj, DynamicsMode.ALT, operation="check_orbit_bounds")
    game = traj.game
    rows = np.flatnonzero(traj.full_mask)
    w = weighted_energy_series(traj, rows)
    x1, x2 = traj.x1[rows], traj.x2[rows]
    sq1 = np.einsum("ij,ij->i", x1, x1)
    sq2 = np.einsum("ij,ij->i", x2, x2)

    tol = BOUND_RTOL * max(1.0, abs(cert.upper_rhs), abs(cert.lower_rhs), float(w[0]))
    lower_ok = cert.lower_coefficient * w >= cert.lower_rhs - tol

    warning = None
    if cert.safe:
        upper_ok = cert.upper_coefficient * w <= cert.upper_rhs + tol
        cap1, cap2 = cert.per_agent_caps
        cap1_ok = sq1 <= cap1 + BOUND_RTOL * max(1.0, cap1)
        cap2_ok = sq2 <= cap2 + BOUND_RTOL * max(1.0, cap2)
    else:
        upper_ok = np.ones(rows.shape[0], dtype=bool)
        cap1_ok = cap2_ok = upper_ok
        warning = (
            f"step sizes unsafe (√(η₁η₂) = {game.steps.geometric_mean:.6g} ≥ "
            f"2/‖A‖ = {2.0 / cert.spectral_norm:.6g}); upper bounds are vacuous"
        )
        logger.warning(warning)

    half_rows = np.flatnonzero(traj.half)
    max_half = float(np.max(weighted_energy_series(traj, half_rows))) if half_rows.size else None

    check = OrbitCheck(
        t=traj.t[rows].copy(),
        upper_ok=upper_ok,
        lower_ok=lower_ok,
        cap1_ok=cap1_ok,
        cap2_ok=cap2_ok,
        vacuous=not cert.safe,
        warning=warning,
        max_half_weighted_energy=max_half,
    )
    if not check.all_passed:
        logger.warning(f"orbit bounds fail first at t={check.first_failure}")
    return check
