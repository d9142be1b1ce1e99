/**
 * Meeting-scene contract against a recorded week-24 meeting reply:
 * the factual review renders before the prompt, the prompt text is the
 * server's verbatim sentence, and an empty response stays submittable.
 */
import { strict as assert } from "node:assert";
import { test } from "node:test";
import { renderMeeting } from "../src/meeting.js";
import { nodeIndex } from "../src/screen.js";
import { fixture } from "./helpers.js";
const meeting = fixture("meeting_week24.json").reply.meeting;
test("review charts render before the prompt dialogue", () => {
    const screen = renderMeeting(meeting, { text: "" });
    const firstChart = nodeIndex(screen, (n) => n.kind === "chart");
    const prompt = nodeIndex(screen, (n) => n.kind === "dialogue" && n.text === meeting.prompt);
    assert.ok(firstChart >= 0, "review charts present");
    assert.ok(prompt >= 0, "prompt present");
    assert.ok(firstChart < prompt, "review must precede the prompt");
});
test("prompt is the server's verbatim sentence", () => {
    assert.equal(meeting.prompt, "How do you think we are doing Kate?");
    const screen = renderMeeting(meeting, { text: "" });
    const prompt = screen.nodes.find((n) => n.kind === "dialogue" && n.text === meeting.prompt);
    assert.ok(prompt);
});
test("chart series carry the server's review values", () => {
    const screen = renderMeeting(meeting, { text: "" });
    const profit = screen.nodes.find((n) => n.kind === "chart" && n.label === "Profit");
    assert.ok(profit && profit.kind === "chart");
    assert.deepEqual(profit.weeks, meeting.review.weeks);
    assert.deepEqual(profit.values, meeting.review.profit);
    assert.equal(meeting.review.weeks.length, 4);
});
test("response field allows an empty submission", () => {
    const screen = renderMeeting(meeting, { text: "" });
    const field = screen.nodes.find((n) => n.kind === "field" && n.id === "bubble");
    assert.ok(field && field.kind === "field");
    assert.equal(field.value, "");
    const button = screen.nodes.find((n) => n.kind === "button" && n.id === "submit-bubble");
    assert.ok(button);
});
test("week 24 carries no disruption notification", () => {
    assert.equal(meeting.notification, false);
    const screen = renderMeeting(meeting, { text: "" });
    const dialogues = screen.nodes.filter((n) => n.kind === "dialogue");
    assert.equal(dialogues.length, 1); // only the prompt
});
test("a network failure notice preserves the typed draft", () => {
    const screen = renderMeeting(meeting, {
        text: "we are doing fine",
        error: "Connection problem; your reply was kept, try again.",
    });
    const field = screen.nodes.find((n) => n.kind === "field" && n.id === "bubble");
    assert.ok(field && field.kind === "field");
    assert.equal(field.value, "we are doing fine");
    assert.ok(screen.nodes.some((n) => n.kind === "error"));
});
