/**
 * Rendering contract for the management screen, checked against
 * recorded server replies: shared information appears exactly when the
 * condition grants it, the order field carries the server's suggestion,
 * and allocation controls exist only on scarce weeks.
 */

import { strict as assert } from "node:assert";
import { test } from "node:test";

import {
  MANUFACTURER_INVENTORY_LABEL,
  defaultDraft,
  renderLaptop,
} from "../src/laptop.js";
import { findNode } from "../src/screen.js";
import type { StateView } from "../src/protocol.js";
import { fixture } from "./helpers.js";

function viewFrom(name: string): StateView {
  return fixture(name).view_reply.view as StateView;
}

function mnInventoryNode(view: StateView) {
  const screen = renderLaptop(view, defaultDraft(view));
  return findNode(
    screen,
    "stat",
    (n) => n.kind === "stat" && n.label === MANUFACTURER_INVENTORY_LABEL,
  );
}

test("no-information condition hides the manufacturer inventory line", () => {
  assert.equal(mnInventoryNode(viewFrom("view_none.json")), undefined);
});

test("partial information shows the manufacturer inventory verbatim", () => {
  const view = viewFrom("view_partial.json");
  const node = mnInventoryNode(view);
  assert.ok(node && node.kind === "stat");
  assert.equal(node.value, String(view.info.manufacturer_inventory));
  // partial shares only the inventory figure
  const screen = renderLaptop(view, defaultDraft(view));
  assert.equal(
    findNode(screen, "stat", (n) => n.kind === "stat" && n.label.startsWith("Delivery rate")),
    undefined,
  );
});

test("complete information adds delivery rates and behavior notes", () => {
  const view = viewFrom("view_complete.json");
  const screen = renderLaptop(view, defaultDraft(view));
  assert.ok(mnInventoryNode(view));
  const rates = screen.nodes.filter(
    (n) => n.kind === "stat" && n.label.startsWith("Delivery rate to "),
  );
  assert.equal(rates.length, Object.keys(view.info.delivery_rates ?? {}).length);
  const notes = screen.nodes.filter(
    (n) => n.kind === "note" && (n.text.startsWith("HC1:") || n.text.startsWith("HC2:")),
  );
  assert.equal(notes.length, 2);
});

test("order field is pre-filled with the server's suggestion", () => {
  for (const name of ["view_none.json", "view_partial.json", "view_complete.json"]) {
    const view = viewFrom(name);
    const screen = renderLaptop(view, defaultDraft(view));
    const field = findNode(screen, "field", (n) => n.kind === "field" && n.id === "order");
    assert.ok(field && field.kind === "field");
    assert.equal(field.value, String(view.suggestion));
  }
});

test("allocation controls are hidden when stock covers demand", () => {
  const view = viewFrom("view_none.json");
  assert.equal(view.requires_allocation, false);
  const screen = renderLaptop(view, defaultDraft(view));
  assert.equal(findNode(screen, "choice"), undefined);
  assert.equal(
    findNode(screen, "button", (n) => n.kind === "button" && n.id === "submit-allocation"),
    undefined,
  );
});

test("scarce weeks expose the three allocation policies", () => {
  const view = viewFrom("view_scarce.json");
  assert.equal(view.requires_allocation, true);
  const screen = renderLaptop(view, defaultDraft(view));
  const choice = findNode(screen, "choice");
  assert.ok(choice && choice.kind === "choice");
  assert.deepEqual(choice.options, ["hc1_first", "hc2_first", "proportional"]);
});

test("every displayed number originates from the server view", () => {
  const view = viewFrom("view_partial.json");
  const screen = renderLaptop(view, defaultDraft(view));
  const byLabel = new Map(
    screen.nodes.flatMap((n) => (n.kind === "stat" ? [[n.label, n.value]] : [])),
  );
  assert.equal(byLabel.get("Inventory on hand"), String(view.on_hand));
  assert.equal(byLabel.get("Shipments received"), String(view.receipts));
  for (const [hc, qty] of Object.entries(view.demand)) {
    assert.equal(byLabel.get(`Demand from ${hc}`), String(qty));
  }
  assert.equal(byLabel.get("Profit so far"), `$${view.money.profit}`);
});

test("a server rejection is surfaced inline without losing the input", () => {
  const view = viewFrom("view_none.json");
  const rejection = fixture("order_rejected.json").reply;
  const draft = defaultDraft(view);
  draft.order = "-5";
  draft.error = rejection.error.message;
  const screen = renderLaptop(view, draft);
  const error = findNode(screen, "error");
  assert.ok(error && error.kind === "error");
  assert.match(error.text, /non-negative/);
  const field = findNode(screen, "field", (n) => n.kind === "field" && n.id === "order");
  assert.ok(field && field.kind === "field");
  assert.equal(field.value, "-5");
});

test("tutorial weeks render as the tutorial scene", () => {
  const view = viewFrom("view_none.json");
  assert.equal(view.in_tutorial, true);
  assert.equal(renderLaptop(view, defaultDraft(view)).scene, "tutorial");
  const scarce = viewFrom("view_scarce.json");
  assert.equal(renderLaptop(scarce, defaultDraft(scarce)).scene, "laptop");
});
