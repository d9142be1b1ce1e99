"""Scripted players for cohort runs and tests.

A bot turns the mid-week view into the same two decisions a human would
make: an allocation policy when stock is short, and an order quantity.
Profiles mirror the behavioral archetypes the analysis recovers:

* ``follower`` orders the suggestion as-is;
* ``hoarder``  orders ``multiplier`` times the suggestion from
  ``start_week`` on;
* ``reactor``  follows until the disruption notification, then orders
  like a hoarder.
"""

from __future__ import annotations

from dataclasses import dataclass

from supplygame.errors import ConfigError
from supplygame.protocol import Schedule

BOT_PROFILES = ("follower", "hoarder", "reactor")


@dataclass(frozen=True)
class BotSpec:
    profile: str
    multiplier: float = 1.5
    start_week: int = 21
    allocation: str = "proportional"
    bubble_style: str = "template"  # or "silent"

    def __post_init__(self):
        if self.profile not in BOT_PROFILES:
            raise ConfigError(f"unknown bot profile {self.profile!r}")
        if self.multiplier < 1:
            raise ConfigError("multiplier must be at least 1")
        if self.bubble_style not in ("template", "silent"):
            raise ConfigError(f"unknown bubble style {self.bubble_style!r}")

    def order_for(self, week: int, suggestion: int, schedule: Schedule) -> int:
        if self.profile == "follower":
            return suggestion
        if self.profile == "hoarder":
            boost = week >= self.start_week
        else:  # reactor
            boost = week >= schedule.notification_week
        return round(self.multiplier * suggestion) if boost else suggestion

    def bubble_text(self, week: int, view: dict) -> str:
        if self.bubble_style == "silent":
            return ""
        backlog = view.get("backlog_total", 0)
        on_hand = view.get("on_hand", 0)
        if backlog > 0:
            return f"Week {week}: backlog at {backlog} units, struggling to keep up."
        return f"Week {week}: inventory at {on_hand} units, demand covered."


FOLLOWER = BotSpec("follower")


def outlier_spec(order_week: int = 30, multiplier: float = 1000.0) -> BotSpec:
    """A one-shot extreme over-orderer, used to plant filterable outliers."""
    return BotSpec("hoarder", multiplier=multiplier, start_week=order_week)
