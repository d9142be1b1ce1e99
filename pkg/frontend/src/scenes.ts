/**
 * Client-side scene state machine.
 *
 * The server is authoritative: the current scene is a pure function of
 * the last reply, and nothing advances without one. The controller
 * keeps per-scene drafts so a rejection or a network failure never
 * loses what the player typed, and it permits exactly one prompt
 * response per meeting.
 */

import type {
  AllocationPolicy,
  DebriefPayload,
  MeetingPayload,
  Phase,
  Reply,
  StateView,
  SurveyPayload,
} from "./protocol.js";
import type { Transport } from "./transport.js";
import { TransportError } from "./transport.js";
import type { Screen, ScreenNode } from "./screen.js";
import { defaultDraft, renderLaptop, type LaptopDraft } from "./laptop.js";
import { renderMeeting, type MeetingDraft } from "./meeting.js";

export class ClientStateError extends Error {}

export interface SceneState {
  phase: Phase | null;
  week: number | null;
  session: string | null;
  view: StateView | null;
  meeting: MeetingPayload | null;
  survey: SurveyPayload | null;
  debrief: DebriefPayload | null;
  laptopDraft: LaptopDraft | null;
  meetingDraft: MeetingDraft | null;
  briefingError: string | null;
}

const BRIEFING_TEXT = [
  "Welcome, Kate. You are the new supply chain director of our wholesale company.",
  "Each week you review inventory, demand and backlog, allocate stock to the health centers when it is scarce, and place an order with our manufacturer.",
  "Orders take two weeks to arrive: one for processing, one for shipping.",
  "The goal is to maximize profit: sales revenue minus holding and stockout costs.",
];

export class SceneController {
  readonly state: SceneState = {
    phase: null,
    week: null,
    session: null,
    view: null,
    meeting: null,
    survey: null,
    debrief: null,
    laptopDraft: null,
    meetingDraft: null,
    briefingError: null,
  };
  private meetingShownAt: number | null = null;

  constructor(
    private readonly transport: Transport,
    private readonly now: () => number = () => Date.now(),
  ) {}

  // ---- lifecycle ---------------------------------------------------

  async start(study: string, seed?: number): Promise<void> {
    const reply = await this.transport.request(
      seed === undefined ? { type: "create", study } : { type: "create", study, seed },
    );
    if (!reply.ok || !reply.session) {
      throw new ClientStateError(reply.error?.message ?? "session creation failed");
    }
    this.state.session = reply.session;
    this.absorb(reply);
  }

  /** From briefing or a finished week, fetch the next state view. */
  async proceed(): Promise<void> {
    const session = this.requireSession();
    const reply = await this.transport.request({ type: "view", session });
    if (reply.ok && reply.view) {
      this.state.view = reply.view;
      this.state.laptopDraft = defaultDraft(reply.view);
    }
    this.absorb(reply);
  }

  async submitAllocation(policy: AllocationPolicy): Promise<void> {
    const session = this.requireSession();
    if (this.state.laptopDraft) this.state.laptopDraft.policy = policy;
    const reply = await this.transport.request({ type: "allocate", session, policy });
    if (!reply.ok) {
      this.rejectLaptop(reply);
      return;
    }
    this.absorb(reply);
  }

  async submitOrder(quantityText: string): Promise<void> {
    const session = this.requireSession();
    const draft = this.state.laptopDraft;
    if (draft) {
      draft.order = quantityText;
      draft.error = undefined;
    }
    const quantity = Number(quantityText);
    if (!Number.isInteger(quantity) || quantity < 0) {
      if (draft) draft.error = "Order must be a non-negative whole number.";
      return;
    }
    const reply = await this.transport.request({ type: "order", session, quantity });
    if (!reply.ok) {
      this.rejectLaptop(reply);
      return;
    }
    this.state.view = null;
    this.state.laptopDraft = null;
    this.absorb(reply);
  }

  async submitBubble(text: string): Promise<void> {
    const session = this.requireSession();
    const meeting = this.state.meeting;
    if (!meeting) {
      throw new ClientStateError("no meeting prompt is open");
    }
    const draft = this.state.meetingDraft ?? { text };
    draft.text = text;
    draft.error = undefined;
    this.state.meetingDraft = draft;
    const seconds =
      this.meetingShownAt === null ? 0 : (this.now() - this.meetingShownAt) / 1000;
    let reply: Reply;
    try {
      reply = await this.transport.request({
        type: "bubble",
        session,
        text,
        response_seconds: Math.max(0, seconds),
      });
    } catch (err) {
      if (err instanceof TransportError) {
        draft.error = "Connection problem; your reply was kept, try again.";
        return; // scene unchanged, text preserved
      }
      throw err;
    }
    if (!reply.ok) {
      draft.error = reply.error?.message ?? "rejected";
      return;
    }
    this.state.meeting = null; // one response per meeting
    this.state.meetingDraft = null;
    this.meetingShownAt = null;
    this.absorb(reply);
  }

  async submitSurvey(answers: Record<string, string>): Promise<void> {
    const session = this.requireSession();
    const reply = await this.transport.request({ type: "survey", session, answers });
    if (reply.ok) {
      this.state.survey = null;
    }
    this.absorb(reply);
  }

  // ---- scene derivation --------------------------------------------

  scene(): Screen["scene"] {
    const phase = this.state.phase;
    if (phase === null || phase === "briefing") return "briefing";
    if (phase === "meeting_prompt") return "meeting";
    if (phase === "survey") return "survey";
    if (phase === "done") return "debrief";
    if (this.state.view?.in_tutorial) return "tutorial";
    return "laptop";
  }

  screen(): Screen {
    switch (this.scene()) {
      case "briefing": {
        const nodes: ScreenNode[] = [{ kind: "heading", text: "Briefing" }];
        for (const line of BRIEFING_TEXT) {
          nodes.push({ kind: "dialogue", speaker: "Boss", text: line });
        }
        if (this.state.briefingError) {
          nodes.push({ kind: "error", text: this.state.briefingError });
        }
        nodes.push({ kind: "button", id: "begin", label: "Start the tutorial" });
        return { scene: "briefing", nodes };
      }
      case "tutorial":
      case "laptop": {
        const view = this.state.view;
        if (!view || !this.state.laptopDraft) {
          return {
            scene: "laptop",
            nodes: [{ kind: "note", text: "Loading the week..." }],
          };
        }
        return renderLaptop(view, this.state.laptopDraft);
      }
      case "meeting": {
        const meeting = this.state.meeting;
        if (!meeting) {
          return { scene: "meeting", nodes: [{ kind: "note", text: "Loading..." }] };
        }
        const draft = this.state.meetingDraft ?? { text: "" };
        this.state.meetingDraft = draft;
        return renderMeeting(meeting, draft);
      }
      case "survey": {
        const nodes: ScreenNode[] = [{ kind: "heading", text: "Survey" }];
        const questions = this.state.survey?.questions ?? [];
        questions.forEach((q, i) => {
          nodes.push({ kind: "field", id: `survey-${i}`, label: q, value: "" });
        });
        nodes.push({ kind: "button", id: "submit-survey", label: "Finish" });
        return { scene: "survey", nodes };
      }
      case "debrief": {
        const d = this.state.debrief;
        const nodes: ScreenNode[] = [{ kind: "heading", text: "Debrief" }];
        if (d) {
          nodes.push({ kind: "stat", label: "Final profit", value: `$${d.profit}` });
          nodes.push({
            kind: "stat",
            label: "Your condition",
            value: `${d.condition.disruption} / ${d.condition.info}`,
          });
          nodes.push({ kind: "note", text: d.text });
        }
        return { scene: "debrief", nodes };
      }
    }
  }

  // ---- internals -----------------------------------------------------

  private requireSession(): string {
    if (!this.state.session) throw new ClientStateError("no session started");
    return this.state.session;
  }

  private rejectLaptop(reply: Reply): void {
    if (this.state.laptopDraft) {
      this.state.laptopDraft.error = reply.error?.message ?? "rejected";
    }
  }

  /** Fold a successful reply into the scene state. */
  private absorb(reply: Reply): void {
    if (!reply.ok) {
      this.state.briefingError = reply.error?.message ?? "request rejected";
      return;
    }
    if (reply.phase !== undefined) this.state.phase = reply.phase;
    if (reply.week !== undefined) this.state.week = reply.week;
    if (reply.meeting) {
      this.state.meeting = reply.meeting;
      this.state.meetingDraft = { text: "" };
      this.meetingShownAt = this.now();
    }
    if (reply.survey) this.state.survey = reply.survey;
    if (reply.debrief) this.state.debrief = reply.debrief;
  }
}
