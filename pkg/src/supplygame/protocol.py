"""Experimental protocol: conditions, calendar, shared information, reviews.

The calendar is fixed by the study design: a four-week tutorial, 35
gameplay weeks, a recurring meeting every four weeks (eight in total)
where the player reviews factual performance figures and answers one
open-ended prompt, and a capacity disruption announced the week it
starts.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from supplygame.errors import ConfigError
from supplygame.sim.engine import SimState, WeekReport
from supplygame.sim.scenario import Scenario

PROMPT_TEXT = "How do you think we are doing Kate?"

DISRUPTION_LOCATIONS = ("MN1", "MN2")
INFO_LEVELS = ("none", "partial", "complete")
STUDIES = ("study1", "study2")

CUSTOMER_BEHAVIOR_NOTES = {
    "HC1": "Orders more from whichever wholesaler has delivered reliably.",
    "HC2": "Always splits its orders equally between both wholesalers.",
}


@dataclass(frozen=True)
class Condition:
    disruption: str
    info: str
    study: str = "study1"

    def __post_init__(self):
        if self.disruption not in DISRUPTION_LOCATIONS:
            raise ConfigError(f"unknown disruption location {self.disruption!r}")
        if self.info not in INFO_LEVELS:
            raise ConfigError(f"unknown info level {self.info!r}")
        if self.study not in STUDIES:
            raise ConfigError(f"unknown study tag {self.study!r}")
        if self.study == "study2" and (self.disruption != "MN1" or self.info == "complete"):
            raise ConfigError("study2 allows only MN1 disruption with none/partial info")

    def as_dict(self) -> dict:
        return {"disruption": self.disruption, "info": self.info, "study": self.study}


STUDY1_CONDITIONS = tuple(
    Condition(d, i, "study1") for d in DISRUPTION_LOCATIONS for i in INFO_LEVELS
)
STUDY2_CONDITIONS = (
    Condition("MN1", "none", "study2"),
    Condition("MN1", "partial", "study2"),
)


@dataclass(frozen=True)
class Schedule:
    tutorial_start: int = 17
    tutorial_end: int = 20
    gameplay_start: int = 21
    gameplay_end: int = 55
    meeting_weeks: tuple[int, ...] = (24, 28, 32, 36, 40, 44, 48, 52)
    notification_week: int = 28
    disruption_start: int = 28
    disruption_end: int = 33
    shortage_start: int = 32
    shortage_end: int = 36

    def __post_init__(self):
        expected = tuple(range(self.gameplay_start + 3, self.gameplay_end, 4))[:8]
        if len(self.meeting_weeks) != 8 or self.meeting_weeks != expected:
            raise ConfigError("meetings must be the 8 weeks at 4-week spacing from week 24")
        if self.notification_week != self.disruption_start:
            raise ConfigError("notification week must equal disruption start")

    def in_tutorial(self, week: int) -> bool:
        return self.tutorial_start <= week <= self.tutorial_end

    def in_gameplay(self, week: int) -> bool:
        return self.gameplay_start <= week <= self.gameplay_end

    def is_meeting(self, week: int) -> bool:
        return week in self.meeting_weeks

    @property
    def gameplay_weeks(self) -> range:
        return range(self.gameplay_start, self.gameplay_end + 1)

    @property
    def ordering_weeks(self) -> range:
        return range(self.tutorial_start, self.gameplay_end + 1)

    def as_dict(self) -> dict:
        return {
            "tutorial": [self.tutorial_start, self.tutorial_end],
            "gameplay": [self.gameplay_start, self.gameplay_end],
            "meetings": list(self.meeting_weeks),
            "notification_week": self.notification_week,
            "disruption": [self.disruption_start, self.disruption_end],
            "shortage": [self.shortage_start, self.shortage_end],
        }


@dataclass(frozen=True)
class InfoPanel:
    """Condition-gated extra information shown alongside the decision task.

    ``none`` shares nothing, ``partial`` adds the supplier manufacturer's
    current inventory, ``complete`` adds recent delivery rates per health
    center and notes on each health center's ordering behavior.
    """
    manufacturer_inventory: int | None = None
    delivery_rates: dict[str, float] | None = None
    customer_behavior: dict[str, str] | None = None

    def visible_fields(self) -> set[str]:
        return {
            name for name, value in (
                ("manufacturer_inventory", self.manufacturer_inventory),
                ("delivery_rates", self.delivery_rates),
                ("customer_behavior", self.customer_behavior),
            ) if value is not None
        }

    def as_dict(self) -> dict:
        return {
            "manufacturer_inventory": self.manufacturer_inventory,
            "delivery_rates": self.delivery_rates,
            "customer_behavior": self.customer_behavior,
        }


@dataclass
class ReviewData:
    """Factual per-week series shown at a meeting. No evaluative text."""
    weeks: list[int]
    revenue: list[int]
    holding_cost: list[int]
    stockout_cost: list[int]
    profit: list[int]
    inventory: list[int]
    demand: list[int]
    backlog: list[int]

    def as_dict(self) -> dict:
        return self.__dict__.copy()


@dataclass(frozen=True)
class MeetingRecord:
    week: int
    prompt: str
    response: str
    response_seconds: float


def assign_condition(rng: random.Random, study: str) -> Condition:
    """Uniform draw over the study's condition set; one rng call per draw."""
    if study == "study1":
        pool = STUDY1_CONDITIONS
    elif study == "study2":
        pool = STUDY2_CONDITIONS
    else:
        raise ConfigError(f"unknown study tag {study!r}")
    return pool[rng.randrange(len(pool))]


def visible_info(condition: Condition, scenario: Scenario, state: SimState) -> InfoPanel:
    """Build the info panel for the controlled seat from live state only."""
    if condition.info == "none":
        return InfoPanel()
    controlled = scenario.controlled_id
    suppliers = scenario.suppliers_of(controlled) if controlled else []
    supplier = suppliers[0] if suppliers else scenario.role_ids("manufacturer")[0]
    inventory = state.agents[supplier].on_hand
    if condition.info == "partial":
        return InfoPanel(manufacturer_inventory=inventory)
    ws = state.agents[controlled] if controlled else None
    rates = {}
    if ws is not None:
        for hc in scenario.customers_of(controlled):
            history = ws.fills.get(hc, [])
            rates[hc] = round(sum(history) / len(history), 4) if history else 1.0
    behavior = {
        hc: CUSTOMER_BEHAVIOR_NOTES.get(hc, "Ordering behavior unavailable.")
        for hc in (scenario.customers_of(controlled) if controlled else [])
    }
    return InfoPanel(
        manufacturer_inventory=inventory,
        delivery_rates=rates,
        customer_behavior=behavior,
    )


def performance_review(history: list[WeekReport], agent_id: str) -> ReviewData:
    """Factual series for ``agent_id`` over the given consecutive reports."""
    if not history:
        raise ValueError("performance review requires at least one week of history")
    rows = [(rep.week, rep.rows[agent_id]) for rep in history]
    return ReviewData(
        weeks=[w for w, _ in rows],
        revenue=[r.revenue for _, r in rows],
        holding_cost=[r.holding_cost for _, r in rows],
        stockout_cost=[r.stockout_cost for _, r in rows],
        profit=[r.profit() for _, r in rows],
        inventory=[r.inventory_end for _, r in rows],
        demand=[r.demand for _, r in rows],
        backlog=[r.backlog_end for _, r in rows],
    )


def raffle_tickets(profit: float, cohort_mean_profit: float) -> int:
    """One completion ticket plus one per $1000 of profit above the cohort mean."""
    return 1 + max(0, math.floor((profit - cohort_mean_profit) / 1000.0))
