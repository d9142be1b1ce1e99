"""Run the platform end to end: standalone simulations and bot cohorts.

Standalone runs drive the flow engine with internal policies only, the
way the simulator runs without a player seat.  Cohort runs create real
sessions against a :class:`SessionService` (in-process by default, or a
remote one through any client with a ``request`` method) and play a
scripted bot through the full protocol, producing the same event logs a
human session would.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from supplygame.errors import ConfigError, ProtocolError
from supplygame.bots import BotSpec
from supplygame.protocol import Schedule
from supplygame.service.service import SessionService
from supplygame.sim.engine import WeekReport, build_network, step
from supplygame.sim.scenario import Scenario


def run_standalone(scenario: Scenario, weeks: int) -> list[WeekReport]:
    """Simulate ``weeks`` weeks with every agent on its internal policy."""
    sc = scenario.without_control()
    state = build_network(sc)
    reports = []
    for _ in range(weeks):
        state, report = step(sc, state)
        reports.append(report)
    return reports


class _InProcessEndpoint:
    def __init__(self, service: SessionService):
        self.service = service

    def request(self, message: dict) -> dict:
        return self.service.handle_message(message)


@dataclass
class SessionOutcome:
    session_id: str
    condition: dict
    profit: int
    bubbles: int
    weeks_played: int
    error: str | None = None


def play_session(endpoint, study: str, spec: BotSpec, seed: int | None = None,
                 schedule: Schedule | None = None) -> SessionOutcome:
    """Drive one scripted session through the full protocol."""
    schedule = schedule or Schedule()
    created = endpoint.request({"type": "create", "study": study, "seed": seed})
    if not created.get("ok"):
        raise ProtocolError(f"create failed: {created.get('error')}")
    sid = created["session"]
    condition = created["condition"]
    bubbles = 0
    weeks = 0

    def ask(message: dict) -> dict:
        reply = endpoint.request({"session": sid, **message})
        if not reply.get("ok"):
            raise ProtocolError(f"{message['type']} rejected: {reply.get('error')}")
        return reply

    reply = {"phase": created["phase"]}
    while True:
        phase = reply["phase"]
        if phase in ("briefing", "await_review"):
            reply = ask({"type": "view"})
            view = reply["view"]
        elif phase == "await_allocation":
            reply = ask({"type": "allocate", "policy": spec.allocation})
        elif phase == "await_order":
            order = spec.order_for(view["week"], view["suggestion"], schedule)
            reply = ask({"type": "order", "quantity": order})
            weeks += 1
        elif phase == "meeting_prompt":
            meeting = reply["meeting"]
            text = spec.bubble_text(meeting["week"], view)
            reply = ask({"type": "bubble", "text": text, "response_seconds": 0.0})
            bubbles += 1
        elif phase == "survey":
            reply = ask({"type": "survey", "answers": {"strategy": spec.profile}})
        elif phase == "done":
            break
        else:
            raise ProtocolError(f"unexpected phase {phase!r}")

    debrief = reply.get("debrief", {})
    return SessionOutcome(
        session_id=sid,
        condition=condition,
        profit=debrief.get("profit", 0),
        bubbles=bubbles,
        weeks_played=weeks,
    )


@dataclass
class CohortPlan:
    """How many sessions to run per labelled bot spec."""
    entries: list[tuple[str, BotSpec, int]] = field(default_factory=list)

    def add(self, label: str, spec: BotSpec, count: int) -> "CohortPlan":
        self.entries.append((label, spec, count))
        return self

    def total(self) -> int:
        return sum(n for _, _, n in self.entries)

    @classmethod
    def parse(cls, text: str) -> "CohortPlan":
        """Parse ``follower=20,hoarder=20,reactor=20,outlier=3``."""
        plan = cls()
        specs = {
            "follower": BotSpec("follower"),
            "hoarder": BotSpec("hoarder"),
            "reactor": BotSpec("reactor"),
            "outlier": BotSpec("hoarder", multiplier=1000.0, start_week=30),
            "silent": BotSpec("follower", bubble_style="silent"),
        }
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                label, count = chunk.split("=")
                plan.add(label.strip(), specs[label.strip()], int(count))
            except (ValueError, KeyError) as exc:
                raise ConfigError(f"bad cohort mix entry {chunk!r}: {exc}") from exc
        return plan


def run_cohort(plan: CohortPlan, study: str, out_dir: str | Path,
               scenario: Scenario, base_seed: int = 0,
               endpoint=None, schedule: Schedule | None = None) -> dict:
    """Run every planned session and write a manifest next to the logs.

    Individual session failures are recorded and do not stop the run.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    local_service = None
    if endpoint is None:
        local_service = SessionService(scenario, out_dir, master_seed=base_seed,
                                       schedule=schedule)
        endpoint = _InProcessEndpoint(local_service)

    manifest = {
        "study": study,
        "base_seed": base_seed,
        "scenario_fingerprint": scenario.fingerprint(),
        "sessions": [],
    }
    index = 0
    for label, spec, count in plan.entries:
        for _ in range(count):
            seed = base_seed + index
            index += 1
            record = {"label": label, "seed": seed, "spec": {
                "profile": spec.profile, "multiplier": spec.multiplier,
                "start_week": spec.start_week, "allocation": spec.allocation,
                "bubble_style": spec.bubble_style,
            }}
            try:
                outcome = play_session(endpoint, study, spec, seed=seed,
                                       schedule=schedule)
                record.update({
                    "session": outcome.session_id,
                    "condition": outcome.condition,
                    "profit": outcome.profit,
                    "bubbles": outcome.bubbles,
                    "weeks_played": outcome.weeks_played,
                })
            except ProtocolError as exc:
                record["error"] = str(exc)
            manifest["sessions"].append(record)

    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2))
    if local_service is not None:
        local_service.close()
    return manifest
