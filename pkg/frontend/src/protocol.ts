/**
 * Wire types for the session service message catalog.
 *
 * Mirrors docs/protocol.md in the repository root: every field the
 * server sends is typed here and the client renders server values
 * verbatim, never numbers it derived itself.
 */

export type Phase =
  | "briefing"
  | "await_review"
  | "await_allocation"
  | "await_order"
  | "meeting_prompt"
  | "survey"
  | "done";

export type AllocationPolicy = "hc1_first" | "hc2_first" | "proportional";

export interface Condition {
  disruption: string;
  info: "none" | "partial" | "complete";
  study: string;
}

export interface InfoPanel {
  manufacturer_inventory: number | null;
  delivery_rates: Record<string, number> | null;
  customer_behavior: Record<string, string> | null;
}

export interface Money {
  revenue: number;
  holding_cost: number;
  stockout_cost: number;
  profit: number;
}

export interface StateView {
  week: number;
  in_tutorial: boolean;
  on_hand: number;
  receipts: number;
  demand: Record<string, number>;
  backlog: Record<string, number>;
  demand_total: number;
  requires_allocation: boolean;
  allocation_policies: AllocationPolicy[];
  suggestion: number;
  info: InfoPanel;
  money: Money;
}

export interface ReviewData {
  weeks: number[];
  revenue: number[];
  holding_cost: number[];
  stockout_cost: number[];
  profit: number[];
  inventory: number[];
  demand: number[];
  backlog: number[];
}

export interface MeetingPayload {
  week: number;
  review: ReviewData;
  prompt: string;
  notification: boolean;
  notification_text: string | null;
}

export interface SurveyPayload {
  questions: string[];
}

export interface DebriefPayload {
  profit: number;
  condition: Condition;
  text: string;
}

export interface ReplyError {
  message: string;
  expected_phase: Phase | null;
}

export interface Reply {
  ok: boolean;
  session: string | null;
  phase?: Phase;
  week?: number;
  condition?: Condition;
  schedule?: { tutorial: number[]; gameplay: number[]; meetings: number[] };
  view?: StateView;
  meeting?: MeetingPayload;
  survey?: SurveyPayload;
  debrief?: DebriefPayload;
  error?: ReplyError;
}

export type Request =
  | { type: "create"; study: string; seed?: number }
  | { type: "view"; session: string }
  | { type: "allocate"; session: string; policy: AllocationPolicy }
  | { type: "allocate"; session: string; quantities: Record<string, number> }
  | { type: "order"; session: string; quantity: number }
  | { type: "bubble"; session: string; text: string; response_seconds?: number }
  | { type: "survey"; session: string; answers: Record<string, string> };
