"""Report models - results of metric and analysis computations."""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class RegretReport(BaseModel):
    """Agent 1's alternating regret against a fixed comparator strategy."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    fixed_strategy: list[float]
    """The comparator x₁."""

    summed_regret: float
    """Literal evaluation of the regret definition over the trajectory."""

    closed_form_regret: float
    """Regret from the first and last agent-1 strategies only."""

    bound: float
    """Horizon-independent upper bound on the regret."""

    horizon: int
    """Number of agent-1 updates T+1 summed over."""

    tolerance: float = 0.0
    """Absolute tolerance used for the checks below."""

    @property
    def agrees(self) -> bool:
        """Summed and closed-form regret coincide within tolerance."""
        return abs(self.summed_regret - self.closed_form_regret) <= self.tolerance

    @property
    def within_bound(self) -> bool:
        return max(self.summed_regret, self.closed_form_regret) <= self.bound + self.tolerance


class BoundsCertificate(BaseModel):
    """Step-size safety margin and the orbit bound constants of a game."""

    spectral_norm: float
    """‖A‖, the largest singular value of the payoff matrix."""

    safety_margin: float
    """2/‖A‖ − √(η₁η₂); strictly positive means the upper bound is informative."""

    upper_rhs: float
    """⟨x₁⁰, A x₂⁰⟩ + ‖x₁⁰‖²/η₁ + ‖x₂⁰‖²/η₂."""

    lower_rhs: float
    """(1 − √(η₁η₂)‖A‖/2)(‖x₁⁰‖²/η₁ + ‖x₂⁰‖²/η₂)."""

    upper_coefficient: float
    """1 − √(η₁η₂)‖A‖/2."""

    lower_coefficient: float
    """1 + √(η₁η₂)‖A‖/2."""

    per_agent_caps: tuple[float, float]
    """Upper bounds on ‖x₁ᵗ‖² and ‖x₂ᵗ‖² (inf when vacuous)."""

    @property
    def safe(self) -> bool:
        """The boundary √(η₁η₂)‖A‖ = 2 counts as unsafe."""
        return self.safety_margin > 0


class OrbitCheck(BaseModel):
    """Per-Full-state pass/fail record of the orbit bounds."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    t: np.ndarray
    """Iteration index of every checked Full state."""

    upper_ok: np.ndarray
    lower_ok: np.ndarray
    cap1_ok: np.ndarray
    cap2_ok: np.ndarray

    vacuous: bool = False
    """Step sizes are unsafe, so the bounds carry no information."""

    warning: Optional[str] = None

    max_half_weighted_energy: Optional[float] = None
    """Largest ‖x₁‖²/η₁ + ‖x₂‖²/η₂ over Half states (observed, not certified)."""

    @property
    def passed(self) -> np.ndarray:
        return self.upper_ok & self.lower_ok & self.cap1_ok & self.cap2_ok

    @property
    def all_passed(self) -> bool:
        return bool(np.all(self.passed))

    @property
    def first_failure(self) -> Optional[int]:
        failed = np.flatnonzero(~self.passed)
        if failed.size == 0:
            return None
        return int(self.t[failed[0]])


class RecurrenceReport(BaseModel):
    """Near-returns of a trajectory to its initial state."""

    epsilon: float
    """Return radius."""

    return_times: list[int] = Field(default_factory=list)
    """Strictly increasing iteration indices τₙ with distance < epsilon."""

    min_distance_seen: float
    """Smallest distance to the initial state over t ≥ 1 (inf for T = 0)."""

    argmin_time: Optional[int] = None
    """Iteration index at which min_distance_seen occurs."""

    horizon: int

    @property
    def recurred(self) -> bool:
        return bool(self.return_times)


class IdentityResidual(BaseModel):
    """Both sides of one per-step identity."""

    t: int
    lhs: float
    rhs: float

    @property
    def residual(self) -> float:
        return self.lhs - self.rhs


class EnergyIdentityResiduals(BaseModel):
    """
    Per-round residuals of the energy/payoff identities along an alternating run.

    Round t relates Full(t), Half(t) and Full(t+1). Relative residuals divide
    |lhs − rhs| by the size of the squared norms entering the lhs (at least 1),
    which is the scale of the floating-point cancellation.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    t: np.ndarray
    """Round indices 0..T−1."""

    agent1_lhs: np.ndarray
    agent1_rhs: np.ndarray
    agent1_relative: np.ndarray

    agent2_lhs: np.ndarray
    agent2_rhs: np.ndarray
    agent2_relative: np.ndarray

    combined_lhs: np.ndarray
    """Change of ‖x₁‖²/η₁ + ‖x₂‖²/η₂ between consecutive Full states."""

    combined_rhs: np.ndarray
    """⟨x₁ᵗ, A x₂ᵗ⟩ − ⟨x₁ᵗ⁺¹, A x₂ᵗ⁺¹⟩."""

    combined_relative: np.ndarray

    perturbed_energy: np.ndarray
    """Perturbed energy at every Full state 0..T."""

    agent2_applies: bool = True
    """Agent 2 played Stage 2, so its identity (and energy conservation) must hold."""

    @property
    def energy_drift(self) -> float:
        """max |E(t) − E(0)| / max(1, |E(0)|) over Full states."""
        e0 = float(self.perturbed_energy[0])
        return float(np.max(np.abs(self.perturbed_energy - e0))) / max(1.0, abs(e0))

    def worst(self) -> dict[str, float]:
        """Largest relative residual of every identity (0 for an empty run)."""

        def peak(arr: np.ndarray) -> float:
            return float(np.max(arr)) if arr.size else 0.0

        return {
            "agent1": peak(self.agent1_relative),
            "agent2": peak(self.agent2_relative),
            "combined": peak(self.combined_relative),
            "energy_drift": self.energy_drift,
        }

    def holds(self, tolerance: float = 1e-9, drift_tolerance: float = 1e-6) -> bool:
        """Every identity that applies holds within the given relative tolerances."""
        worst = self.worst()
        if worst["agent1"] > tolerance:
            return False
        if self.agent2_applies:
            if worst["agent2"] > tolerance or worst["combined"] > tolerance:
                return False
            if worst["energy_drift"] > drift_tolerance:
                return False
        return True


class VolumeTrack(BaseModel):
    """Hull areas of a planar point cloud pushed through an update map."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    steps: np.ndarray
    """Step indices at which the cloud was recorded (0 first)."""

    areas: np.ndarray
    """Convex hull area at every recorded step."""

    clouds: list[np.ndarray] = Field(default_factory=list)
    """The mapped point cloud at every recorded step, shape (N, 2) each."""

    degenerate: bool = False
    """The initial cloud has zero hull area."""

    @property
    def relative_drift(self) -> float:
        """max |area(t) − area(0)| / area(0); 0 for a degenerate cloud."""
        a0 = float(self.areas[0])
        if a0 == 0.0:
            return float(np.max(np.abs(self.areas)))
        return float(np.max(np.abs(self.areas - a0))) / a0

    @property
    def growth_factors(self) -> np.ndarray:
        """Ratios of consecutive recorded areas."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.areas[1:] / self.areas[:-1]
