/**
 * Scene state machine: transitions happen only on server replies,
 * drafts survive failures, and each meeting accepts exactly one reply.
 */
import { strict as assert } from "node:assert";
import { test } from "node:test";
import { ClientStateError, SceneController } from "../src/scenes.js";
import { TransportError } from "../src/transport.js";
import { FakeTransport, fixture } from "./helpers.js";
const created = fixture("view_partial.json").create_reply;
const viewReply = fixture("view_partial.json").view_reply;
const meetingReply = fixture("meeting_week24.json").reply;
const rejection = fixture("order_rejected.json").reply;
test("scenes advance only on server replies", async () => {
    const transport = new FakeTransport([created, viewReply]);
    const controller = new SceneController(transport);
    await controller.start("study1", 3);
    assert.equal(controller.scene(), "briefing");
    await controller.proceed();
    assert.equal(controller.scene(), "tutorial"); // week 17 view
    assert.equal(controller.state.view?.week, 17);
});
test("order rejection keeps the scene and the typed quantity", async () => {
    const transport = new FakeTransport([created, viewReply, rejection]);
    const controller = new SceneController(transport);
    await controller.start("study1", 3);
    await controller.proceed();
    await controller.submitOrder("-5");
    assert.equal(controller.scene(), "tutorial");
    assert.equal(controller.state.laptopDraft?.order, "-5");
    assert.match(controller.state.laptopDraft?.error ?? "", /non-negative/);
});
test("non-integer input is caught client-side without a request", async () => {
    const transport = new FakeTransport([created, viewReply]);
    const controller = new SceneController(transport);
    await controller.start("study1", 3);
    await controller.proceed();
    const sent = transport.requests.length;
    await controller.submitOrder("many");
    assert.equal(transport.requests.length, sent); // nothing hit the wire
    assert.match(controller.state.laptopDraft?.error ?? "", /whole number/);
});
test("meeting allows exactly one response, then moves on", async () => {
    const afterBubble = {
        ok: true,
        session: created.session,
        phase: "await_review",
        week: 25,
    };
    const transport = new FakeTransport([created, viewReply, meetingReply, afterBubble]);
    const clock = { t: 1000 };
    const controller = new SceneController(transport, () => clock.t);
    await controller.start("study1", 3);
    await controller.proceed();
    clock.t = 1000; // meeting appears...
    await controller.submitOrder(String(viewReply.view.suggestion));
    assert.equal(controller.scene(), "meeting");
    clock.t = 13500; // ...and the reply comes 12.5 s later
    await controller.submitBubble("");
    const bubbleRequest = transport.requests.find((r) => r.type === "bubble");
    assert.ok(bubbleRequest && bubbleRequest.type === "bubble");
    assert.equal(bubbleRequest.text, "");
    assert.equal(bubbleRequest.response_seconds, 12.5);
    assert.notEqual(controller.scene(), "meeting");
    await assert.rejects(() => controller.submitBubble("again"), ClientStateError);
});
test("a transport failure keeps the meeting and the draft text", async () => {
    const transport = new FakeTransport([
        created,
        viewReply,
        meetingReply,
        new TransportError("connection reset"),
    ]);
    const controller = new SceneController(transport);
    await controller.start("study1", 3);
    await controller.proceed();
    await controller.submitOrder(String(viewReply.view.suggestion));
    await controller.submitBubble("half-typed thought");
    assert.equal(controller.scene(), "meeting");
    assert.equal(controller.state.meetingDraft?.text, "half-typed thought");
    assert.match(controller.state.meetingDraft?.error ?? "", /kept/);
    // the retry goes through and carries the same text
    const afterBubble = {
        ok: true,
        session: created.session,
        phase: "await_review",
        week: 25,
    };
    transport.push(afterBubble);
    await controller.submitBubble("half-typed thought");
    assert.notEqual(controller.scene(), "meeting");
    const texts = transport.requests
        .filter((r) => r.type === "bubble")
        .map((r) => (r.type === "bubble" ? r.text : ""));
    assert.deepEqual(texts, ["half-typed thought", "half-typed thought"]);
});
test("survey and debrief close the loop", async () => {
    const surveyReply = {
        ok: true,
        session: created.session,
        phase: "survey",
        week: 56,
        survey: { questions: ["How engaging was it?"] },
    };
    const debriefReply = {
        ok: true,
        session: created.session,
        phase: "done",
        week: 56,
        debrief: {
            profit: 4120,
            condition: { disruption: "MN1", info: "partial", study: "study1" },
            text: "Thanks for playing.",
        },
    };
    const transport = new FakeTransport([created, viewReply, surveyReply, debriefReply]);
    const controller = new SceneController(transport);
    await controller.start("study1", 3);
    await controller.proceed();
    await controller.submitOrder("40"); // scripted reply jumps to survey
    assert.equal(controller.scene(), "survey");
    await controller.submitSurvey({ "survey-0": "7" });
    assert.equal(controller.scene(), "debrief");
    const screen = controller.screen();
    const profit = screen.nodes.find((n) => n.kind === "stat" && n.label === "Final profit");
    assert.ok(profit && profit.kind === "stat");
    assert.equal(profit.value, "$4120");
});
