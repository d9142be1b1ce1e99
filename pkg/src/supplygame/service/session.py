"""Per-session protocol state machine.

A session walks one player (human or bot) through the study: a briefing,
the four tutorial weeks, 35 gameplay weeks with a recurring meeting
scene every four weeks, then survey and debrief.  Each week the player
views the state, allocates when stock cannot cover demand, and places an
order; on meeting weeks the order is followed by a performance review
and the fixed open-ended prompt before the next week begins.

The machine is deterministic and emits every accepted message as an
event through a sink callback, which makes live handling and replay the
same code path.

Phases and the messages they accept:

=================  =========================================
phase              accepted message
=================  =========================================
briefing           ``view`` (proceeds into the weekly loop)
await_review       ``view``
await_allocation   ``allocate`` (only when stock < demand)
await_order        ``order``
meeting_prompt     ``bubble``
survey             ``survey``
done               nothing
=================  =========================================
"""

from __future__ import annotations

from dataclasses import dataclass, replace, field
from typing import Callable

from supplygame.errors import DecisionError, ProtocolError
from supplygame.protocol import (
    PROMPT_TEXT,
    Condition,
    Schedule,
    performance_review,
    visible_info,
)
from supplygame.sim.engine import (
    ExternalDecision,
    SimState,
    WeekReport,
    build_network,
    reset_ledgers,
    resolve_allocation,
    step,
    week_view,
)
from supplygame.sim.policies import ALLOCATION_POLICIES
from supplygame.sim.scenario import Scenario

PHASES = ("briefing", "await_review", "await_allocation", "await_order",
          "meeting_prompt", "survey", "done")

DEFAULT_SURVEY_QUESTIONS = (
    "How engaging did you find the task? (1 = not at all, 7 = very)",
    "In a sentence or two, describe the ordering strategy you used.",
    "Age (optional)",
    "Gender (optional)",
)

NOTIFICATION_TEXT = (
    "Heads up Kate: our manufacturer reports a COVID-19 shutdown starting "
    "this week. Production will be heavily reduced until it reopens."
)

EXPECTED_MESSAGE = {
    "briefing": "view",
    "await_review": "view",
    "await_allocation": "allocate",
    "await_order": "order",
    "meeting_prompt": "bubble",
    "survey": "survey",
    "done": None,
}


@dataclass
class Session:
    session_id: str
    condition: Condition
    scenario: Scenario  # already retargeted for the condition's disruption
    schedule: Schedule
    sink: Callable[[str, int, dict], None]
    survey_questions: tuple[str, ...] = DEFAULT_SURVEY_QUESTIONS
    state: SimState = None
    phase: str = "briefing"
    pending_allocation: str | dict[str, int] | None = None
    pending_meeting_week: int | None = None
    reports: list[WeekReport] = field(default_factory=list)

    def __post_init__(self):
        if self.state is None:
            self.state = build_network(self.scenario)

    # -- helpers -------------------------------------------------------

    @property
    def controlled(self) -> str:
        return self.scenario.controlled_id

    def profit(self) -> int:
        return self.state.agents[self.controlled].profit()

    def emit(self, kind: str, week: int, payload: dict) -> None:
        self.sink(kind, week, payload)

    def state_view(self) -> dict:
        view = week_view(self.scenario, self.state)
        ws = self.controlled
        agent = self.state.agents[ws]
        panel = visible_info(self.condition, self.scenario, self.state)
        if panel.manufacturer_inventory is not None:
            # keep the shared figure coherent with the mid-week snapshot
            supplier = self.scenario.suppliers_of(ws)[0]
            panel = replace(panel, manufacturer_inventory=view.mn_inventory[supplier])
        return {
            "week": view.week,
            "in_tutorial": self.schedule.in_tutorial(view.week),
            "on_hand": view.on_hand[ws],
            "receipts": view.receipts[ws],
            "demand": dict(view.hc_orders[ws]),
            "backlog": dict(agent.backlog),
            "demand_total": sum(view.ws_demand[ws].values()),
            "requires_allocation": view.requires_allocation[ws],
            "allocation_policies": list(ALLOCATION_POLICIES),
            "suggestion": view.suggestions[ws],
            "info": panel.as_dict(),
            "money": {
                "revenue": agent.revenue,
                "holding_cost": agent.holding,
                "stockout_cost": agent.stockout,
                "profit": agent.profit(),
            },
        }

    def _reply(self, **extra) -> dict:
        base = {
            "ok": True,
            "session": self.session_id,
            "phase": self.phase,
            "week": self.state.week,
        }
        base.update(extra)
        return base

    def _reject(self, message_type: str) -> ProtocolError:
        expected = EXPECTED_MESSAGE[self.phase]
        if expected is None:
            return ProtocolError(
                f"session is finished; no {message_type!r} accepted", expected_phase="done")
        return ProtocolError(
            f"message {message_type!r} illegal in phase {self.phase!r}; "
            f"expected {expected!r}", expected_phase=self.phase)

    # -- message handling ------------------------------------------------

    def apply(self, message: dict) -> dict:
        mtype = message.get("type")
        handler = {
            "view": self._on_view,
            "allocate": self._on_allocate,
            "order": self._on_order,
            "bubble": self._on_bubble,
            "survey": self._on_survey,
        }.get(mtype)
        if handler is None:
            raise ProtocolError(f"unknown message type {mtype!r}")
        return handler(message)

    def _on_view(self, message: dict) -> dict:
        if self.phase not in ("briefing", "await_review"):
            raise self._reject("view")
        view = self.state_view()
        self.emit("state-viewed", self.state.week, {"week": self.state.week})
        self.phase = "await_allocation" if view["requires_allocation"] else "await_order"
        return self._reply(view=view)

    def _on_allocate(self, message: dict) -> dict:
        if self.phase != "await_allocation":
            raise self._reject("allocate")
        policy = message.get("policy")
        quantities = message.get("quantities")
        if (policy is None) == (quantities is None):
            raise ProtocolError("allocate needs exactly one of 'policy' or 'quantities'",
                                expected_phase=self.phase)
        if policy is not None:
            if policy not in ALLOCATION_POLICIES:
                raise ProtocolError(f"unknown allocation policy {policy!r}",
                                    expected_phase=self.phase)
            decision, payload = policy, {"week": self.state.week, "policy": policy}
        else:
            if (not isinstance(quantities, dict)
                    or not all(isinstance(v, int) for v in quantities.values())):
                raise ProtocolError("allocation quantities must be an integer map",
                                    expected_phase=self.phase)
            decision = dict(quantities)
            payload = {"week": self.state.week, "quantities": dict(quantities)}
            # validate against the current mid-week numbers before persisting,
            # so only replayable decisions ever reach the log
            view = week_view(self.scenario, self.state)
            ws = self.controlled
            try:
                resolve_allocation(ws, view.on_hand[ws], view.ws_demand[ws], decision)
            except DecisionError as exc:
                raise ProtocolError(str(exc), expected_phase=self.phase) from exc
        self.pending_allocation = decision
        self.emit("allocation-submitted", self.state.week, payload)
        self.phase = "await_order"
        return self._reply()

    def _on_order(self, message: dict) -> dict:
        if self.phase != "await_order":
            raise self._reject("order")
        quantity = message.get("quantity")
        if not isinstance(quantity, int) or isinstance(quantity, bool) or quantity < 0:
            raise ProtocolError("order quantity must be a non-negative integer",
                                expected_phase=self.phase)
        week_played = self.state.week
        view = week_view(self.scenario, self.state)
        external = ExternalDecision(order=quantity, allocation=self.pending_allocation)
        try:
            new_state, report = step(self.scenario, self.state, external)
        except DecisionError as exc:
            raise ProtocolError(str(exc), expected_phase=self.phase) from exc
        self.state = new_state
        self.reports.append(report)
        self.pending_allocation = None
        self.emit("order-submitted", week_played, {
            "week": week_played,
            "quantity": quantity,
            "suggestion": view.suggestions[self.controlled],
        })
        if week_played == self.schedule.tutorial_end:
            # gameplay scoring starts fresh; physical state carries over
            self.state = reset_ledgers(self.state)

        if self.schedule.is_meeting(week_played):
            self.pending_meeting_week = week_played
            meeting = self._meeting_payload(week_played)
            self.emit("meeting-shown", week_played, {
                "week": week_played,
                "notification": meeting["notification"],
            })
            self.phase = "meeting_prompt"
            return self._reply(meeting=meeting)
        return self._finish_week()

    def _finish_week(self) -> dict:
        if self.state.week > self.schedule.gameplay_end:
            self.phase = "survey"
            return self._reply(survey={"questions": list(self.survey_questions)})
        self.phase = "await_review"
        return self._reply()

    def _meeting_payload(self, meeting_week: int) -> dict:
        start = max(self.schedule.gameplay_start, meeting_week - 3)
        window = [r for r in self.reports if start <= r.week <= meeting_week]
        review = performance_review(window, self.controlled)
        is_notification = meeting_week == self.schedule.notification_week
        return {
            "week": meeting_week,
            "review": review.as_dict(),
            "prompt": PROMPT_TEXT,
            "notification": is_notification,
            "notification_text": NOTIFICATION_TEXT if is_notification else None,
        }

    def _on_bubble(self, message: dict) -> dict:
        if self.phase != "meeting_prompt":
            raise self._reject("bubble")
        text = message.get("text")
        if not isinstance(text, str):
            raise ProtocolError("bubble text must be a string (may be empty)",
                                expected_phase=self.phase)
        seconds = message.get("response_seconds", 0.0)
        if not isinstance(seconds, (int, float)) or seconds < 0:
            raise ProtocolError("response_seconds must be a non-negative number",
                                expected_phase=self.phase)
        self.emit("bubble-answered", self.pending_meeting_week, {
            "week": self.pending_meeting_week,
            "text": text,
            "response_seconds": float(seconds),
        })
        self.pending_meeting_week = None
        return self._finish_week()

    def _on_survey(self, message: dict) -> dict:
        if self.phase != "survey":
            raise self._reject("survey")
        answers = message.get("answers", {})
        if not isinstance(answers, dict):
            raise ProtocolError("survey answers must be an object", expected_phase=self.phase)
        self.emit("survey-answered", self.state.week, {"answers": answers})
        profit = self.profit()
        self.emit("debriefed", self.state.week, {"profit": profit})
        self.phase = "done"
        return self._reply(debrief={
            "profit": profit,
            "condition": self.condition.as_dict(),
            "text": (
                "Thanks for playing. Your final gameplay profit was "
                f"${profit}. The study compared supply disruptions and "
                "information sharing; your condition is shown above."
            ),
        })
