from supplygame.sim.scenario import Scenario, Disruption, load_scenario, default_scenario
from supplygame.sim.engine import SimState, WeekReport, build_network, step, week_view, reset_ledgers
from supplygame.sim.policies import (
    order_up_to_suggestion,
    split_demand,
    allocate,
    trust_update,
    trust_shares,
    largest_remainder,
    ALLOCATION_POLICIES,
)

__all__ = [
    "Scenario",
    "Disruption",
    "load_scenario",
    "default_scenario",
    "SimState",
    "WeekReport",
    "build_network",
    "step",
    "week_view",
    "reset_ledgers",
    "order_up_to_suggestion",
    "split_demand",
    "allocate",
    "trust_update",
    "trust_shares",
    "largest_remainder",
    "ALLOCATION_POLICIES",
]
