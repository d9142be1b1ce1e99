/**
 * The recurring meeting scene: the factual performance review first,
 * then the boss character delivers the fixed open-ended prompt and the
 * player types a free-form response (leaving it empty is allowed).
 *
 * The review-before-prompt ordering is part of the scene contract, and
 * the prompt text comes verbatim from the server.
 */

import type { MeetingPayload } from "./protocol.js";
import type { Screen, ScreenNode } from "./screen.js";

export interface MeetingDraft {
  text: string;
  error?: string; // network failure notice; the draft text is preserved
}

export function renderMeeting(meeting: MeetingPayload, draft: MeetingDraft): Screen {
  const nodes: ScreenNode[] = [];
  nodes.push({ kind: "heading", text: `Monthly meeting — week ${meeting.week}` });

  if (meeting.notification && meeting.notification_text) {
    nodes.push({ kind: "dialogue", speaker: "Boss", text: meeting.notification_text });
  }

  const review = meeting.review;
  const series: Array<[string, number[]]> = [
    ["Profit", review.profit],
    ["Revenue", review.revenue],
    ["Holding cost", review.holding_cost],
    ["Stockout cost", review.stockout_cost],
    ["Inventory", review.inventory],
    ["Demand", review.demand],
    ["Backlog", review.backlog],
  ];
  for (const [label, values] of series) {
    nodes.push({ kind: "chart", label, weeks: review.weeks, values });
  }

  nodes.push({ kind: "dialogue", speaker: "Boss", text: meeting.prompt });
  if (draft.error) {
    nodes.push({ kind: "error", text: draft.error });
  }
  nodes.push({
    kind: "field",
    id: "bubble",
    label: "Your thoughts (optional)",
    value: draft.text,
  });
  nodes.push({ kind: "button", id: "submit-bubble", label: "Reply" });
  return { scene: "meeting", nodes };
}
