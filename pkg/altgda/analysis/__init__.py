"""Safety margins, orbit bounds, volume preservation and recurrence."""

from .bounds import stepsize_safety, conic_classify_1d, conic_value_1d, check_orbit_bounds
from .volume import (
    jacobian_stage1,
    jacobian_stage2,
    jacobian_altgd,
    jacobian_simgd,
    volume_track,
    check_injectivity,
)
from .recurrence import recurrence_scan, rotation_angle_2d, rotation_period, default_epsilon

__all__ = [
    "stepsize_safety",
    "conic_classify_1d",
    "conic_value_1d",
    "check_orbit_bounds",
    "jacobian_stage1",
    "jacobian_stage2",
    "jacobian_altgd",
    "jacobian_simgd",
    "volume_track",
    "check_injectivity",
    "recurrence_scan",
    "rotation_angle_2d",
    "rotation_period",
    "default_epsilon",
]
