"""Update rules and rollouts for gradient descent-ascent dynamics."""

from .updates import (
    ascent_update,
    descent_update,
    sim_gd_step,
    alt_gd_stage1,
    alt_gd_stage2,
    alt_gd_step,
    alt_gd_stage1_inverse,
    alt_gd_stage2_inverse,
    alt_gd_inverse_step,
)
from .rollout import (
    DIVERGENCE_LIMIT,
    TrajectoryBuffer,
    rollout,
    rollout_vs_opponent,
)
from .continuous import continuous_reference, rk4_step

__all__ = [
    "ascent_update",
    "descent_update",
    "sim_gd_step",
    "alt_gd_stage1",
    "alt_gd_stage2",
    "alt_gd_step",
    "alt_gd_stage1_inverse",
    "alt_gd_stage2_inverse",
    "alt_gd_inverse_step",
    "DIVERGENCE_LIMIT",
    "TrajectoryBuffer",
    "rollout",
    "rollout_vs_opponent",
    "continuous_reference",
    "rk4_step",
]
