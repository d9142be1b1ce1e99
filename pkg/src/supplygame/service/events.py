"""Append-only session event log.

One JSON object per line, schema-versioned.  Sequence numbers are dense
and strictly increasing within a session; every accepted message is
flushed to the log before the server replies, so a crash after any
reply loses nothing.  Wall-clock timestamps are recorded for audit but
play no part in replay.

Record fields:

``v``        log schema version (integer, currently 1)
``session``  session id the event belongs to
``seq``      1-based dense sequence number
``week``     simulation week the event refers to
``kind``     one of: joined, state-viewed, allocation-submitted,
             order-submitted, meeting-shown, bubble-answered,
             survey-answered, debriefed
``payload``  kind-specific JSON object
``ts``       ISO-8601 wall-clock timestamp
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from supplygame.errors import ReplayError

EVENT_SCHEMA_VERSION = 1

EVENT_KINDS = (
    "joined",
    "state-viewed",
    "allocation-submitted",
    "order-submitted",
    "meeting-shown",
    "bubble-answered",
    "survey-answered",
    "debriefed",
)


@dataclass(frozen=True)
class SessionEvent:
    session: str
    seq: int
    week: int
    kind: str
    payload: dict
    ts: str = ""
    v: int = EVENT_SCHEMA_VERSION

    def to_json(self) -> str:
        doc = {"v": self.v, "session": self.session, "seq": self.seq,
               "week": self.week, "kind": self.kind, "payload": self.payload,
               "ts": self.ts}
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


class EventLog:
    """Single-writer append-only log for one session."""

    def __init__(self, path: str | Path, session_id: str, fsync: bool = False):
        self.path = Path(path)
        self.session_id = session_id
        self.fsync = fsync
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._seq = 0
        if self.path.exists():
            existing = read_events(self.path)
            if existing and existing[-1].session != session_id:
                raise ReplayError(f"log {path} belongs to session {existing[-1].session}")
            self._seq = existing[-1].seq if existing else 0
        self._fh = open(self.path, "a", encoding="utf-8")

    @property
    def seq(self) -> int:
        return self._seq

    def append(self, kind: str, week: int, payload: dict) -> SessionEvent:
        if kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {kind!r}")
        self._seq += 1
        event = SessionEvent(
            session=self.session_id,
            seq=self._seq,
            week=week,
            kind=kind,
            payload=payload,
            ts=datetime.now(timezone.utc).isoformat(timespec="milliseconds"),
        )
        self._fh.write(event.to_json() + "\n")
        self._fh.flush()
        if self.fsync:
            import os
            os.fsync(self._fh.fileno())
        return event

    def close(self) -> None:
        self._fh.close()


def read_events(path: str | Path) -> list[SessionEvent]:
    """Parse and validate a session log (dense sequence, single session)."""
    events: list[SessionEvent] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ReplayError(f"{path}:{lineno}: corrupt event: {exc}") from exc
            if doc.get("v") != EVENT_SCHEMA_VERSION:
                raise ReplayError(
                    f"{path}:{lineno}: schema version {doc.get('v')!r}, "
                    f"expected {EVENT_SCHEMA_VERSION}")
            try:
                events.append(SessionEvent(
                    session=doc["session"], seq=doc["seq"], week=doc["week"],
                    kind=doc["kind"], payload=doc["payload"], ts=doc.get("ts", "")))
            except KeyError as exc:
                raise ReplayError(f"{path}:{lineno}: missing field {exc}") from exc
    for i, ev in enumerate(events, start=1):
        if ev.seq != i:
            raise ReplayError(f"sequence gap: expected {i}, found {ev.seq}")
        if ev.session != events[0].session:
            raise ReplayError("events from multiple sessions in one log")
        if ev.kind not in EVENT_KINDS:
            raise ReplayError(f"unknown event kind {ev.kind!r}")
    return events
