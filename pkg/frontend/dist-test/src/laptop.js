/**
 * The management-screen scene: weekly numbers, allocation and ordering.
 *
 * Everything shown is lifted straight from the server's state view.
 * The order field arrives pre-filled with the server's suggestion (the
 * player may change it); allocation controls exist only on weeks the
 * server says stock cannot cover demand; the shared-information lines
 * exist only when the condition granted them (the view carries nulls
 * otherwise).
 */
export const MANUFACTURER_INVENTORY_LABEL = "Manufacturer's inventory";
export const DELIVERY_RATE_LABEL = "Delivery rate";
export function defaultDraft(view) {
    return { order: String(view.suggestion), policy: "proportional" };
}
export function renderLaptop(view, draft) {
    const nodes = [];
    nodes.push({
        kind: "heading",
        text: `Week ${view.week} — wholesale management system`,
    });
    if (view.in_tutorial) {
        nodes.push({
            kind: "note",
            text: "Tutorial week: practice gathering information and deciding. Results reset when the real game starts.",
        });
    }
    nodes.push({ kind: "stat", label: "Inventory on hand", value: String(view.on_hand) });
    nodes.push({ kind: "stat", label: "Shipments received", value: String(view.receipts) });
    for (const [hc, qty] of Object.entries(view.demand)) {
        nodes.push({ kind: "stat", label: `Demand from ${hc}`, value: String(qty) });
    }
    for (const [hc, qty] of Object.entries(view.backlog)) {
        nodes.push({ kind: "stat", label: `Backlog owed to ${hc}`, value: String(qty) });
    }
    nodes.push({
        kind: "stat",
        label: "Profit so far",
        value: `$${view.money.profit}`,
    });
    const info = view.info;
    if (info.manufacturer_inventory !== null) {
        nodes.push({
            kind: "stat",
            label: MANUFACTURER_INVENTORY_LABEL,
            value: String(info.manufacturer_inventory),
        });
    }
    if (info.delivery_rates !== null) {
        for (const [hc, rate] of Object.entries(info.delivery_rates)) {
            nodes.push({
                kind: "stat",
                label: `${DELIVERY_RATE_LABEL} to ${hc}`,
                value: `${Math.round(rate * 100)}%`,
            });
        }
    }
    if (info.customer_behavior !== null) {
        for (const [hc, note] of Object.entries(info.customer_behavior)) {
            nodes.push({ kind: "note", text: `${hc}: ${note}` });
        }
    }
    if (draft.error) {
        nodes.push({ kind: "error", text: draft.error });
    }
    if (view.requires_allocation) {
        nodes.push({
            kind: "note",
            text: `Stock (${view.on_hand}) cannot cover total demand (${view.demand_total}); choose an allocation policy.`,
        });
        nodes.push({
            kind: "choice",
            id: "allocation",
            label: "Allocation policy",
            options: view.allocation_policies,
            selected: draft.policy,
        });
        nodes.push({ kind: "button", id: "submit-allocation", label: "Allocate" });
    }
    nodes.push({
        kind: "field",
        id: "order",
        label: "Order from manufacturer (suggested amount shown)",
        value: draft.order,
    });
    nodes.push({ kind: "button", id: "submit-order", label: "Place order" });
    return { scene: view.in_tutorial ? "tutorial" : "laptop", nodes };
}
