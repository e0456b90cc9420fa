"""Enumerations for altgda."""

from enum import Enum


class Stage(str, Enum):
    """Position of a state inside an update round."""

    FULL = "full"
    """Both agents have updated (x₁ᵗ, x₂ᵗ)."""

    HALF = "half"
    """Agent 1 has updated, agent 2 has not (x₁ᵗ⁺¹, x₂ᵗ)."""


class DynamicsMode(str, Enum):
    """Update system that produced a trajectory."""

    ALT = "alt"
    """Alternating play: Stage 1 then Stage 2."""

    SIM = "sim"
    """Simultaneous play: both agents read the old state."""

    CONTINUOUS = "continuous"
    """Continuous-time reference flow, sampled."""

    ALT_VS_OPPONENT = "alt_vs_opponent"
    """Agent 1 plays Stage 1, agent 2 follows an arbitrary opponent rule."""


class ConicType(str, Enum):
    """Shape of the level set holding a one-dimensional alternating orbit."""

    ELLIPSE = "ellipse"
    PARABOLA = "parabola"
    HYPERBOLA = "hyperbola"


class OpponentKind(str, Enum):
    """Named opponent rules available from configuration."""

    STAGE2 = "stage2"
    """Agent 2 plays the alternating Stage 2 update."""

    CONSTANT = "constant"
    """Agent 2 always plays the same configured vector."""

    ZERO = "zero"
    """Agent 2 always plays the zero vector."""

    SCRIPTED = "scripted"
    """Agent 2 replays one vector per line from a file."""

    RANDOM = "random"
    """Agent 2 plays seeded uniform noise."""


class RunStatus(str, Enum):
    """Outcome of a harness run."""

    COMPLETED = "completed"
    """All outputs written and every requested check passed."""

    DIVERGED = "diverged"
    """The rollout left the representable range; partial outputs written."""

    INVARIANT_FAILED = "invariant_failed"
    """Outputs written but a verified identity or bound failed."""

    CONFIG_ERROR = "config_error"
    """The configuration could not be loaded."""

    FAILED = "failed"
    """Any other error."""
