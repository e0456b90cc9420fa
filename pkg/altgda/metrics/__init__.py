"""Utilities, energies and regret of gradient descent-ascent trajectories."""

from .utility import (
    cumulative_utility_sim,
    cumulative_utility_alt,
    cumulative_utility_series,
)
from .energy import (
    weighted_energy,
    perturbed_energy,
    energy_delta_agent1,
    energy_delta_agent2,
    energy_step_identity,
    weighted_energy_series,
    perturbed_energy_series,
    energy_identity_residuals,
)
from .regret import (
    regret_alt_summed,
    regret_sim_summed,
    regret_series,
    regret_alt_closed_form,
    regret_bound,
    regret_tolerance,
    regret_report,
)

__all__ = [
    "cumulative_utility_sim",
    "cumulative_utility_alt",
    "cumulative_utility_series",
    "weighted_energy",
    "perturbed_energy",
    "energy_delta_agent1",
    "energy_delta_agent2",
    "energy_step_identity",
    "weighted_energy_series",
    "perturbed_energy_series",
    "energy_identity_residuals",
    "regret_alt_summed",
    "regret_sim_summed",
    "regret_series",
    "regret_alt_closed_form",
    "regret_bound",
    "regret_tolerance",
    "regret_report",
]
