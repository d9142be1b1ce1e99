import pytest

from supplygame.bots import BotSpec
from supplygame.protocol import Schedule
from supplygame.sim.engine import ExternalDecision, build_network, step, week_view
from supplygame.sim.scenario import default_scenario


def drive_bot(scenario, spec: BotSpec, weeks: int, schedule: Schedule | None = None):
    """Run `weeks` engine steps with a bot in the controlled seat."""
    schedule = schedule or Schedule()
    state = build_network(scenario)
    controlled = scenario.controlled_id
    reports = []
    for _ in range(weeks):
        external = None
        if controlled is not None:
            view = week_view(scenario, state)
            order = spec.order_for(state.week, view.suggestions[controlled], schedule)
            allocation = spec.allocation if view.requires_allocation[controlled] else None
            external = ExternalDecision(order=order, allocation=allocation)
        state, report = step(scenario, state, external)
        reports.append(report)
    return state, reports


@pytest.fixture
def follower_run():
    def _run(disruption_target, weeks=39, demand=40):
        sc = default_scenario(demand=demand, disruption_target=disruption_target)
        return drive_bot(sc, BotSpec("follower"), weeks)
    return _run
