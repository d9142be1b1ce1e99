"""Session service: creates sessions, routes messages, persists, replays.

The service owns a scenario template and a data directory.  Creating a
session draws a condition (uniform over the study's set, deterministic
in the session seed), retargets the scenario's disruption accordingly,
and appends a ``joined`` event.  Every accepted message is persisted
before its reply is produced; replaying a log therefore reconstructs the
live state exactly, which is also how crashed services resume.
"""

from __future__ import annotations

import random
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from supplygame.errors import ProtocolError, ReplayError
from supplygame.protocol import PROMPT_TEXT, Condition, MeetingRecord, Schedule, assign_condition
from supplygame.service.events import EventLog, SessionEvent, read_events
from supplygame.service.session import Session
from supplygame.sim.scenario import Scenario

DECISION_MESSAGE_FOR_KIND = {
    "state-viewed": "view",
    "allocation-submitted": "allocate",
    "order-submitted": "order",
    "bubble-answered": "bubble",
    "survey-answered": "survey",
}


@dataclass
class ReplayResult:
    session_id: str
    condition: Condition
    phase: str
    week: int
    profit: int
    events: int
    state_snapshot: dict
    reports: list
    bubbles: list[MeetingRecord]


class SessionService:
    def __init__(self, scenario: Scenario, data_dir: str | Path,
                 master_seed: int = 0, schedule: Schedule | None = None,
                 idle_expiry_seconds: float | None = None,
                 survey_questions: tuple[str, ...] | None = None,
                 fsync: bool = False):
        if scenario.controlled_id is None:
            raise ProtocolError("service scenario needs an externally controlled agent")
        self.scenario = scenario
        self.schedule = schedule or Schedule()
        self.survey_questions = survey_questions
        self.data_dir = Path(data_dir)
        self.sessions_dir = self.data_dir / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self._rng = random.Random(master_seed)
        self._counter = 0
        self._sessions: dict[str, Session] = {}
        self._logs: dict[str, EventLog] = {}
        self._last_active: dict[str, float] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._service_lock = threading.Lock()
        self.idle_expiry_seconds = idle_expiry_seconds
        self.fsync = fsync

    # -- session lifecycle ------------------------------------------------

    def log_path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.jsonl"

    def create_session(self, study: str, seed: int | None = None) -> dict:
        with self._service_lock:
            if seed is None:
                seed = self._rng.randrange(2**31)
            self._counter += 1
            session_id = f"{study}-{self._counter:04d}-{seed:08x}"
            while self.log_path(session_id).exists():
                self._counter += 1
                session_id = f"{study}-{self._counter:04d}-{seed:08x}"
        condition = assign_condition(random.Random(seed), study)
        scenario = self.scenario.with_disruption_target(condition.disruption)
        log = EventLog(self.log_path(session_id), session_id, fsync=self.fsync)
        kwargs = {}
        if self.survey_questions is not None:
            kwargs["survey_questions"] = self.survey_questions
        session = Session(
            session_id=session_id,
            condition=condition,
            scenario=scenario,
            schedule=self.schedule,
            sink=log.append,
            **kwargs,
        )
        log.append("joined", scenario.start_week, {
            "study": study,
            "seed": seed,
            "condition": condition.as_dict(),
            "schedule": self.schedule.as_dict(),
            "scenario_fingerprint": self.scenario.fingerprint(),
        })
        with self._service_lock:
            self._sessions[session_id] = session
            self._logs[session_id] = log
            self._locks[session_id] = threading.Lock()
            self._last_active[session_id] = time.monotonic()
        return {
            "ok": True,
            "session": session_id,
            "condition": condition.as_dict(),
            "phase": session.phase,
            "week": session.state.week,
            "schedule": {
                "tutorial": [self.schedule.tutorial_start, self.schedule.tutorial_end],
                "gameplay": [self.schedule.gameplay_start, self.schedule.gameplay_end],
                "meetings": list(self.schedule.meeting_weeks),
            },
        }

    def _expire_idle(self) -> None:
        if self.idle_expiry_seconds is None:
            return
        now = time.monotonic()
        with self._service_lock:
            stale = [sid for sid, t in self._last_active.items()
                     if now - t > self.idle_expiry_seconds]
            for sid in stale:
                self._sessions.pop(sid, None)
                log = self._logs.pop(sid, None)
                if log:
                    log.close()
                self._locks.pop(sid, None)
                self._last_active.pop(sid, None)

    def handle_message(self, message: dict) -> dict:
        """Route one client message; always returns a reply document."""
        if not isinstance(message, dict):
            return self._error_reply(None, ProtocolError("message must be an object"))
        mtype = message.get("type")
        if mtype == "create":
            study = message.get("study", "study1")
            seed = message.get("seed")
            if seed is not None and not isinstance(seed, int):
                return self._error_reply(None, ProtocolError("seed must be an integer"))
            try:
                return self.create_session(study, seed)
            except Exception as exc:  # malformed study tag and friends
                return self._error_reply(None, ProtocolError(str(exc)))
        self._expire_idle()
        session_id = message.get("session")
        session = self._sessions.get(session_id)
        if session is None:
            hint = "session expired or unknown" if session_id else "missing session id"
            if session_id and self.log_path(session_id).exists():
                hint = "session not live (expired or service restarted); replay log to resume"
            return self._error_reply(session_id, ProtocolError(hint))
        lock = self._locks[session_id]
        with lock:
            self._last_active[session_id] = time.monotonic()
            try:
                return session.apply(message)
            except ProtocolError as exc:
                return self._error_reply(session_id, exc, phase=session.phase,
                                         week=session.state.week)

    @staticmethod
    def _error_reply(session_id: str | None, exc: ProtocolError, **extra) -> dict:
        reply = {
            "ok": False,
            "session": session_id,
            "error": {
                "message": str(exc),
                "expected_phase": getattr(exc, "expected_phase", None),
            },
        }
        reply.update(extra)
        return reply

    # -- replay and recovery ----------------------------------------------

    def replay(self, session_id: str) -> ReplayResult:
        return replay_log(self.log_path(session_id), self.scenario, self.schedule)

    def resume(self, session_id: str) -> dict:
        """Rebuild a live session from its log after a restart."""
        result, session = _rebuild(self.log_path(session_id), self.scenario, self.schedule)
        log = EventLog(self.log_path(session_id), session_id, fsync=self.fsync)
        session.sink = log.append
        with self._service_lock:
            self._sessions[session_id] = session
            self._logs[session_id] = log
            self._locks[session_id] = threading.Lock()
            self._last_active[session_id] = time.monotonic()
        return {"ok": True, "session": session_id, "phase": session.phase,
                "week": session.state.week}

    def close(self) -> None:
        with self._service_lock:
            for log in self._logs.values():
                log.close()
            self._logs.clear()
            self._sessions.clear()


def _rebuild(log_path: str | Path, scenario_template: Scenario,
             schedule: Schedule) -> tuple[ReplayResult, Session]:
    events = read_events(log_path)
    if not events:
        raise ReplayError(f"empty log {log_path}")
    if events[0].kind != "joined":
        raise ReplayError("log must start with a joined event")
    joined = events[0].payload
    if joined.get("scenario_fingerprint") != scenario_template.fingerprint():
        raise ReplayError("log was produced under a different scenario")
    if "schedule" in joined and joined["schedule"] != schedule.as_dict():
        raise ReplayError("log was produced under a different schedule")
    condition = Condition(**joined["condition"])
    scenario = scenario_template.with_disruption_target(condition.disruption)

    emitted: list[tuple[str, int, dict]] = []
    session = Session(
        session_id=events[0].session,
        condition=condition,
        scenario=scenario,
        schedule=schedule,
        sink=lambda kind, week, payload: emitted.append((kind, week, payload)),
    )
    bubbles = []
    cursor = 1  # joined already consumed
    while cursor < len(events):
        ev = events[cursor]
        msg_type = DECISION_MESSAGE_FOR_KIND.get(ev.kind)
        if msg_type is None:
            raise ReplayError(
                f"unexpected {ev.kind} event at seq {ev.seq}: not preceded by its trigger")
        message = _message_from_event(msg_type, ev)
        emitted.clear()
        session.apply(message)
        for kind, week, payload in emitted:
            if cursor >= len(events):
                # log cut off mid-write: the triggering decision was accepted,
                # so its full deterministic effect stands
                if kind == "bubble-answered":
                    bubbles.append(payload)
                continue
            rec = events[cursor]
            if (rec.kind, rec.week) != (kind, week) or rec.payload != payload:
                raise ReplayError(
                    f"replay diverged at seq {rec.seq}: recorded {rec.kind}, "
                    f"recomputed {kind}")
            if kind == "bubble-answered":
                bubbles.append(MeetingRecord(
                    week=payload["week"], prompt=PROMPT_TEXT,
                    response=payload["text"],
                    response_seconds=payload["response_seconds"]))
            cursor += 1

    result = ReplayResult(
        session_id=session.session_id,
        condition=condition,
        phase=session.phase,
        week=session.state.week,
        profit=session.profit(),
        events=len(events),
        state_snapshot=session.state.snapshot(),
        reports=session.reports,
        bubbles=bubbles,
    )
    return result, session


def _message_from_event(msg_type: str, ev: SessionEvent) -> dict:
    payload = ev.payload
    if msg_type == "view":
        return {"type": "view"}
    if msg_type == "allocate":
        if "policy" in payload:
            return {"type": "allocate", "policy": payload["policy"]}
        return {"type": "allocate", "quantities": payload["quantities"]}
    if msg_type == "order":
        return {"type": "order", "quantity": payload["quantity"]}
    if msg_type == "bubble":
        return {"type": "bubble", "text": payload["text"],
                "response_seconds": payload["response_seconds"]}
    if msg_type == "survey":
        return {"type": "survey", "answers": payload["answers"]}
    raise ReplayError(f"unmapped message type {msg_type}")


def replay_log(log_path: str | Path, scenario_template: Scenario,
               schedule: Schedule | None = None) -> ReplayResult:
    """Deterministically reconstruct a session from its event log."""
    result, _ = _rebuild(log_path, scenario_template, schedule or Schedule())
    return result
