"""Core data models for altgda."""

from .enums import Stage, DynamicsMode, ConicType, OpponentKind, RunStatus
from .game import (
    PayoffMatrix,
    StepSizes,
    JointState,
    GameInstance,
    payoff,
    payoff_agent2,
    check_dimensions,
    as_vector,
)
from .trajectory import Trajectory
from .reports import (
    RegretReport,
    BoundsCertificate,
    OrbitCheck,
    RecurrenceReport,
    IdentityResidual,
    EnergyIdentityResiduals,
    VolumeTrack,
)
from .experiment import ExperimentConfig

__all__ = [
    "Stage",
    "DynamicsMode",
    "ConicType",
    "OpponentKind",
    "RunStatus",
    "PayoffMatrix",
    "StepSizes",
    "JointState",
    "GameInstance",
    "payoff",
    "payoff_agent2",
    "check_dimensions",
    "as_vector",
    "Trajectory",
    "RegretReport",
    "BoundsCertificate",
    "OrbitCheck",
    "RecurrenceReport",
    "IdentityResidual",
    "EnergyIdentityResiduals",
    "VolumeTrack",
    "ExperimentConfig",
]
