"""Discrete-time weekly flow engine for the six-agent drug supply chain.

Every week runs the same phase sequence, downstream information first:

1. arrivals: pipeline entries due this week land in on-hand stock
   (manufacturer production completions arrive the same way);
2. health centers serve patient demand, backorder the shortfall, and
   place order-up-to orders split across their wholesalers (HC1 by
   delivery trust, HC2 equally);
3. wholesalers ship against new orders plus backlog -- in full when
   stock suffices, otherwise via an allocation policy -- and place their
   own order-up-to orders upstream (the controlled seat supplies both
   decisions externally);
4. manufacturers ship from stock, then start production up to the
   week's effective capacity (disruptions scale capacity down);
5. accounting: revenue on units sold, holding cost per unit on hand,
   stockout cost per unit backlogged.

Shipped units always arrive two weeks after the order that triggered
them (one week processing, one week transit), so a pipeline entry
created in week ``t`` carries arrival week ``t + 2``.  Trust scores a
health center keeps about its wholesalers update after ordering, from
the fill rate of this week's allocation, so order splits always use last
week's scores.

The engine is deterministic: a scenario plus an external decision
sequence fixes the entire trajectory bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from supplygame.errors import ConfigError, DecisionError
from supplygame.sim.scenario import FACTORY, PATIENTS, Scenario, validate_scenario
from supplygame.sim.policies import (
    allocate,
    largest_remainder,
    order_up_to_suggestion,
    split_demand,
    trust_update,
)

FILL_WINDOW = 4  # weeks of per-customer fill history kept for the info panel


@dataclass
class AgentSim:
    on_hand: int = 0
    backlog: dict[str, int] = field(default_factory=dict)
    inbound: list[tuple[int, int, str]] = field(default_factory=list)  # (arrival, qty, source)
    revenue: int = 0
    holding: int = 0
    stockout: int = 0
    trust: dict[str, float] = field(default_factory=dict)
    fills: dict[str, list[float]] = field(default_factory=dict)

    def backlog_total(self) -> int:
        return sum(self.backlog.values())

    def in_transit(self) -> int:
        return sum(q for _, q, _ in self.inbound)

    def profit(self) -> int:
        return self.revenue - self.holding - self.stockout

    def clone(self) -> "AgentSim":
        return AgentSim(
            on_hand=self.on_hand,
            backlog=dict(self.backlog),
            inbound=list(self.inbound),
            revenue=self.revenue,
            holding=self.holding,
            stockout=self.stockout,
            trust=dict(self.trust),
            fills={k: list(v) for k, v in self.fills.items()},
        )


@dataclass
class SimState:
    week: int
    agents: dict[str, AgentSim]

    def clone(self) -> "SimState":
        return SimState(self.week, {k: v.clone() for k, v in self.agents.items()})

    def snapshot(self) -> dict:
        """Canonical serialisable form, used for replay/determinism checks."""
        return {
            "week": self.week,
            "agents": {
                k: {
                    "on_hand": a.on_hand,
                    "backlog": dict(sorted(a.backlog.items())),
                    "inbound": sorted(a.inbound),
                    "revenue": a.revenue,
                    "holding": a.holding,
                    "stockout": a.stockout,
                    "trust": {t: round(v, 12) for t, v in sorted(a.trust.items())},
                    "fills": {c: [round(f, 12) for f in fs] for c, fs in sorted(a.fills.items())},
                }
                for k, a in sorted(self.agents.items())
            },
        }


@dataclass
class AgentWeek:
    receipts: int = 0
    shipments: int = 0
    demand: int = 0
    sales: int = 0
    inventory_start: int = 0
    inventory_end: int = 0
    backlog_end: int = 0
    backlog_change: int = 0
    holding_cost: int = 0
    stockout_cost: int = 0
    revenue: int = 0
    suggestion: int = 0
    order_placed: int = 0
    orders_to: dict[str, int] = field(default_factory=dict)
    shipments_to: dict[str, int] = field(default_factory=dict)
    production_request: int | None = None
    effective_capacity: int | None = None

    def profit(self) -> int:
        return self.revenue - self.holding_cost - self.stockout_cost


@dataclass
class WeekReport:
    week: int
    rows: dict[str, AgentWeek]


@dataclass
class WeekView:
    """Everything known mid-week, before the external decision is due."""
    week: int
    receipts: dict[str, int]
    on_hand: dict[str, int]
    hc_orders: dict[str, dict[str, int]]  # wholesaler -> {hc: new order}
    ws_demand: dict[str, dict[str, int]]  # wholesaler -> {hc: new + backlog}
    suggestions: dict[str, int]
    requires_allocation: dict[str, bool]
    patient_served: dict[str, int]
    mn_inventory: dict[str, int]


@dataclass
class ExternalDecision:
    order: int
    allocation: str | dict[str, int] | None = None


def build_network(scenario: Scenario) -> SimState:
    """Initial state at the scenario start week, primed for stationarity.

    Pipelines carry the steady weekly flow for the next two arrival
    weeks, manufacturers hold one production cycle of finished stock,
    and every backlog starts at zero, so an undisrupted run repeats the
    same week report indefinitely.
    """
    validate_scenario(scenario)
    start = scenario.start_week
    agents: dict[str, AgentSim] = {}

    # steady inbound flow per wholesaler = sum of each customer HC's equal share
    ws_flow: dict[str, int] = {w: 0 for w in scenario.role_ids("wholesaler")}
    hc_share: dict[str, dict[str, int]] = {}
    for hc in scenario.role_ids("health-center"):
        share = largest_remainder(scenario.demand[hc],
                                  {s: 1.0 for s in scenario.suppliers_of(hc)})
        hc_share[hc] = share
        for ws, q in share.items():
            ws_flow[ws] += q

    for hc in scenario.role_ids("health-center"):
        level = scenario.order_up_to[hc]
        demand = scenario.demand[hc]
        on_hand = level - 2 * demand
        if on_hand < 0:
            raise ConfigError(f"order-up-to level for {hc} below two weeks of demand")
        inbound = [
            (week, q, ws)
            for week in (start, start + 1)
            for ws, q in sorted(hc_share[hc].items())
            if q > 0
        ]
        trust = {}
        if scenario.hc_split.get(hc, "equal") == "trust":
            trust = {ws: scenario.trust_initial for ws in scenario.suppliers_of(hc)}
        agents[hc] = AgentSim(on_hand=on_hand, inbound=inbound, trust=trust)

    mn_flow: dict[str, int] = {m: 0 for m in scenario.role_ids("manufacturer")}
    for ws in scenario.role_ids("wholesaler"):
        level = scenario.order_up_to[ws]
        flow = ws_flow[ws]
        on_hand = level - 2 * flow
        if on_hand < 0:
            raise ConfigError(f"order-up-to level for {ws} below two weeks of throughput")
        supplier_share = largest_remainder(flow, {s: 1.0 for s in scenario.suppliers_of(ws)})
        inbound = [
            (week, q, mn)
            for week in (start, start + 1)
            for mn, q in sorted(supplier_share.items())
            if q > 0
        ]
        for mn, q in supplier_share.items():
            mn_flow[mn] += q
        agents[ws] = AgentSim(on_hand=on_hand, inbound=inbound)

    for mn in scenario.role_ids("manufacturer"):
        level = scenario.order_up_to[mn]
        flow = mn_flow[mn]
        on_hand = level - flow
        if on_hand < 0:
            raise ConfigError(f"order-up-to level for {mn} below one week of throughput")
        if scenario.capacity[mn] < flow:
            raise ConfigError(f"baseline capacity of {mn} below steady throughput")
        inbound = [(start, flow, FACTORY)] if flow > 0 else []
        agents[mn] = AgentSim(on_hand=on_hand, inbound=inbound)

    ordered = {a.id: agents[a.id] for a in scenario.agents}
    return SimState(week=start, agents=ordered)


def _on_order(state: SimState, scenario: Scenario, agent_id: str) -> int:
    """Units in transit plus units owed by suppliers (their backlog to us)."""
    a = state.agents[agent_id]
    owed = sum(
        state.agents[s].backlog.get(agent_id, 0) for s in scenario.suppliers_of(agent_id)
    )
    return a.in_transit() + owed


def _phase_arrive_and_order(scenario: Scenario, st: SimState) -> WeekView:
    """Phases 1-2 (mutating): arrivals, patient service, health-center orders."""
    wk = st.week
    receipts = {}
    for aid, a in st.agents.items():
        due = sum(q for arr, q, _ in a.inbound if arr == wk)
        a.on_hand += due
        a.inbound = [e for e in a.inbound if e[0] != wk]
        receipts[aid] = due

    patient_served: dict[str, int] = {}
    hc_orders: dict[str, dict[str, int]] = {w: {} for w in scenario.role_ids("wholesaler")}
    hc_totals: dict[str, int] = {}
    for hc in scenario.role_ids("health-center"):
        a = st.agents[hc]
        need = scenario.demand[hc] + a.backlog.get(PATIENTS, 0)
        served = min(a.on_hand, need)
        a.on_hand -= served
        if need - served:
            a.backlog[PATIENTS] = need - served
        else:
            a.backlog.pop(PATIENTS, None)
        patient_served[hc] = served

        qty = order_up_to_suggestion(
            scenario.order_up_to[hc], a.on_hand, _on_order(st, scenario, hc),
            a.backlog_total(),
        )
        hc_totals[hc] = qty
        mode = scenario.hc_split.get(hc, "equal")
        split = split_demand(qty, scenario.suppliers_of(hc), mode, a.trust or None)
        for ws, q in split.items():
            hc_orders[ws][hc] = q

    ws_demand: dict[str, dict[str, int]] = {}
    suggestions: dict[str, int] = dict(hc_totals)
    requires_allocation: dict[str, bool] = {}
    for ws in scenario.role_ids("wholesaler"):
        a = st.agents[ws]
        demand_by_c = {
            hc: hc_orders[ws].get(hc, 0) + a.backlog.get(hc, 0)
            for hc in scenario.customers_of(ws)
        }
        ws_demand[ws] = demand_by_c
        total_demand = sum(demand_by_c.values())
        requires_allocation[ws] = a.on_hand < total_demand
        # the order decision comes after this week's shipment, so the whole
        # current demand is already committed: it either leaves on-hand
        # stock or becomes backlog, lowering the position either way
        suggestions[ws] = order_up_to_suggestion(
            scenario.order_up_to[ws], a.on_hand, _on_order(st, scenario, ws),
            total_demand,
        )

    return WeekView(
        week=wk,
        receipts=receipts,
        on_hand={aid: st.agents[aid].on_hand for aid in st.agents},
        hc_orders=hc_orders,
        ws_demand=ws_demand,
        suggestions=suggestions,
        requires_allocation=requires_allocation,
        patient_served=patient_served,
        mn_inventory={m: st.agents[m].on_hand for m in scenario.role_ids("manufacturer")},
    )


def week_view(scenario: Scenario, state: SimState) -> WeekView:
    """Mid-week view for the current week, without advancing the state."""
    return _phase_arrive_and_order(scenario, state.clone())


def resolve_allocation(ws: str, on_hand: int, demand_by_c: dict[str, int],
                        decision: str | dict[str, int]) -> dict[str, int]:
    if isinstance(decision, str):
        return allocate(on_hand, demand_by_c, decision)
    total = sum(demand_by_c.values())
    if sum(decision.values()) > on_hand:
        raise DecisionError(f"allocation for {ws} exceeds on-hand inventory")
    if set(decision) - set(demand_by_c):
        raise DecisionError(f"allocation for {ws} names unknown customers")
    if any(q < 0 for q in decision.values()):
        raise DecisionError("allocation quantities must be non-negative")
    if any(decision.get(c, 0) > demand_by_c[c] for c in demand_by_c):
        raise DecisionError("allocation exceeds a customer's demand")
    if sum(decision.values()) != min(on_hand, total):
        raise DecisionError("allocation must distribute min(on-hand, total demand)")
    return {c: decision.get(c, 0) for c in demand_by_c}


def step(scenario: Scenario, state: SimState,
         external: ExternalDecision | None = None) -> tuple[SimState, WeekReport]:
    """Advance the simulation one week.

    ``external`` must be present exactly when the scenario marks an
    agent as externally controlled; its ``allocation`` must be present
    exactly when that agent's stock cannot cover total demand.
    """
    controlled = scenario.controlled_id
    if controlled is not None and external is None:
        raise DecisionError(f"missing external decision for {controlled}")
    if controlled is None and external is not None:
        raise DecisionError("external decision supplied but no agent is controlled")

    st = state.clone()
    wk = st.week
    inv_start = {aid: a.on_hand for aid, a in st.agents.items()}
    view = _phase_arrive_and_order(scenario, st)

    rows = {aid: AgentWeek(receipts=view.receipts[aid], inventory_start=inv_start[aid])
            for aid in st.agents}

    for hc in scenario.role_ids("health-center"):
        r = rows[hc]
        r.demand = scenario.demand[hc]
        r.sales = r.shipments = view.patient_served[hc]
        r.suggestion = r.order_placed = view.suggestions[hc]

    for ws, by_hc in view.hc_orders.items():
        for hc, q in by_hc.items():
            rows[hc].orders_to[ws] = q

    if external is not None:
        if not isinstance(external.order, int) or external.order < 0:
            raise DecisionError("external order must be a non-negative integer")
        needs_alloc = view.requires_allocation[controlled]
        if needs_alloc and external.allocation is None:
            raise DecisionError(f"allocation decision required for {controlled} this week")
        if not needs_alloc and external.allocation is not None:
            raise DecisionError("allocation decision not accepted: stock covers demand")

    # --- wholesalers ship, then order upstream --------------------------
    mn_new_orders: dict[str, dict[str, int]] = {m: {} for m in scenario.role_ids("manufacturer")}
    for ws in scenario.role_ids("wholesaler"):
        a = st.agents[ws]
        demand_by_c = view.ws_demand[ws]
        total = sum(demand_by_c.values())
        if a.on_hand >= total:
            alloc = dict(demand_by_c)
        elif ws == controlled:
            alloc = resolve_allocation(ws, a.on_hand, demand_by_c, external.allocation)
        else:
            alloc = allocate(a.on_hand, demand_by_c, scenario.allocation_default)
        shipped = 0
        for hc in sorted(demand_by_c):
            q = alloc.get(hc, 0)
            demand = demand_by_c[hc]
            if q:
                st.agents[hc].inbound.append((wk + scenario.lead_time_weeks, q, ws))
                shipped += q
            if demand - q:
                a.backlog[hc] = demand - q
            else:
                a.backlog.pop(hc, None)
            rows[ws].shipments_to[hc] = q
            if demand > 0:
                fill = q / demand
                a.fills.setdefault(hc, []).append(fill)
                a.fills[hc] = a.fills[hc][-FILL_WINDOW:]
                hc_state = st.agents[hc]
                if ws in hc_state.trust:
                    hc_state.trust[ws] = trust_update(
                        hc_state.trust[ws], fill,
                        scenario.trust_smoothing, scenario.trust_floor,
                    )
        a.on_hand -= shipped
        r = rows[ws]
        r.demand = sum(view.hc_orders[ws].values())
        r.shipments = r.sales = shipped
        r.suggestion = view.suggestions[ws]

        order_qty = external.order if ws == controlled else view.suggestions[ws]
        r.order_placed = order_qty
        supplier_split = largest_remainder(
            order_qty, {s: 1.0 for s in scenario.suppliers_of(ws)})
        for mn, q in supplier_split.items():
            mn_new_orders[mn][ws] = q
            r.orders_to[mn] = q

    # --- manufacturers ship from stock, then produce under capacity -----
    for mn in scenario.role_ids("manufacturer"):
        a = st.agents[mn]
        demand_by_c = {
            ws: mn_new_orders[mn].get(ws, 0) + a.backlog.get(ws, 0)
            for ws in scenario.customers_of(mn)
        }
        total = sum(demand_by_c.values())
        if a.on_hand >= total:
            alloc = dict(demand_by_c)
        else:
            alloc = allocate(a.on_hand, demand_by_c, "proportional")
        shipped = 0
        for ws in sorted(demand_by_c):
            q = alloc.get(ws, 0)
            if q:
                st.agents[ws].inbound.append((wk + scenario.lead_time_weeks, q, mn))
                shipped += q
            if demand_by_c[ws] - q:
                a.backlog[ws] = demand_by_c[ws] - q
            else:
                a.backlog.pop(ws, None)
            rows[mn].shipments_to[ws] = q
        a.on_hand -= shipped

        request = order_up_to_suggestion(
            scenario.order_up_to[mn], a.on_hand, a.in_transit(), a.backlog_total())
        cap = scenario.effective_capacity(mn, wk)
        produced = min(request, cap)
        if produced:
            a.inbound.append((wk + 1, produced, FACTORY))
        r = rows[mn]
        r.demand = sum(mn_new_orders[mn].values())
        r.shipments = r.sales = shipped
        r.suggestion = request
        r.production_request = request
        r.order_placed = produced
        r.orders_to[FACTORY] = produced
        r.effective_capacity = cap

    # --- accounting ------------------------------------------------------
    for aid, a in st.agents.items():
        r = rows[aid]
        backlog_start = state.agents[aid].backlog_total()
        r.inventory_end = a.on_hand
        r.backlog_end = a.backlog_total()
        r.backlog_change = r.backlog_end - backlog_start
        r.holding_cost = scenario.holding_cost * a.on_hand
        r.stockout_cost = scenario.stockout_cost * r.backlog_end
        r.revenue = scenario.revenue_per_unit * r.sales
        a.holding += r.holding_cost
        a.stockout += r.stockout_cost
        a.revenue += r.revenue
        if r.inventory_end - r.inventory_start != r.receipts - r.shipments:
            raise AssertionError(f"flow conservation violated for {aid} in week {wk}")

    st.week = wk + 1
    return st, WeekReport(week=wk, rows=rows)


def reset_ledgers(state: SimState) -> SimState:
    """Zero every money ledger, keeping physical state (tutorial reset)."""
    st = state.clone()
    for a in st.agents.values():
        a.revenue = a.holding = a.stockout = 0
    return st
