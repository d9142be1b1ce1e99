#!/usr/bin/env python3
"""Record server replies as fixtures for the browser client's contract tests.

Drives real sessions through the in-process service and freezes the JSON
replies the client would have received over the wire, so the frontend
test suite can check its rendering contract against genuine server
output without a live server.

Run from the repository root:

    python3 tools/record_frontend_fixtures.py
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from supplygame.protocol import assign_condition
from supplygame.service.service import SessionService
from supplygame.sim.scenario import default_scenario

FIXTURES = ROOT / "frontend" / "test" / "fixtures"


def seed_for_info(level: str) -> int:
    for seed in range(200):
        if assign_condition(random.Random(seed), "study1").info == level:
            return seed
    raise RuntimeError(f"no seed found for info level {level}")


def drive_until(svc, sid, stop):
    """Play follower decisions until ``stop(reply, view)`` returns a value."""
    while True:
        view_reply = svc.handle_message({"type": "view", "session": sid})
        view = view_reply["view"]
        hit = stop("view", view_reply)
        if hit is not None:
            return hit
        if view["requires_allocation"]:
            svc.handle_message({"type": "allocate", "session": sid,
                                "policy": "proportional"})
        order_reply = svc.handle_message({"type": "order", "session": sid,
                                          "quantity": view["suggestion"]})
        hit = stop("order", order_reply)
        if hit is not None:
            return hit
        if order_reply.get("meeting"):
            svc.handle_message({"type": "bubble", "session": sid, "text": "ok"})
        if order_reply["phase"] == "survey":
            raise RuntimeError("reached survey without hitting the stop condition")


def record(tmp_dir: Path) -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    svc = SessionService(default_scenario(), tmp_dir, master_seed=0)

    for level in ("none", "partial", "complete"):
        seed = seed_for_info(level)
        created = svc.create_session("study1", seed=seed)
        sid = created["session"]
        view_reply = svc.handle_message({"type": "view", "session": sid})
        assert created["condition"]["info"] == level
        (FIXTURES / f"view_{level}.json").write_text(json.dumps({
            "note": f"create + first view for a {level}-information condition",
            "create_reply": created,
            "view_reply": view_reply,
        }, indent=2))

    # a meeting reply: first meeting of a partial-information session
    created = svc.create_session("study1", seed=seed_for_info("partial"))
    sid = created["session"]
    meeting_reply = drive_until(
        svc, sid,
        lambda kind, r: r if kind == "order" and r.get("meeting") else None)
    assert meeting_reply["meeting"]["week"] == 24
    (FIXTURES / "meeting_week24.json").write_text(json.dumps({
        "note": "reply to the order that triggers the first meeting scene",
        "reply": meeting_reply,
    }, indent=2))

    # a scarce week: allocation controls must appear
    created = svc.create_session("study1", seed=seed_for_info("partial"))
    sid = created["session"]
    scarce_view = drive_until(
        svc, sid,
        lambda kind, r: r if kind == "view" and r["view"]["requires_allocation"] else None)
    (FIXTURES / "view_scarce.json").write_text(json.dumps({
        "note": "a disruption-window week where stock cannot cover demand",
        "view_reply": scarce_view,
    }, indent=2))

    # an order rejection: malformed quantity, state untouched
    created = svc.create_session("study1", seed=seed_for_info("none"))
    sid = created["session"]
    svc.handle_message({"type": "view", "session": sid})
    rejection = svc.handle_message({"type": "order", "session": sid, "quantity": -5})
    assert not rejection["ok"]
    (FIXTURES / "order_rejected.json").write_text(json.dumps({
        "note": "server rejection of a malformed order",
        "reply": rejection,
    }, indent=2))

    svc.close()
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        record(Path(tmp))
