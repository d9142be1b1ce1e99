"""Scenario configuration: topology, policies, costs, and disruptions.

A scenario is a versioned JSON document.  ``load_scenario`` validates the
whole document and returns an immutable :class:`Scenario`; everything the
engine does is a pure function of one of these plus the external decision
stream.
"""

from __future__ import annotations

import json
import hashlib
from dataclasses import dataclass, field, replace, asdict
from pathlib import Path

from supplygame.errors import ConfigError

SCENARIO_SCHEMA_VERSION = 1

ROLES = ("manufacturer", "wholesaler", "health-center")

FACTORY = "__factory__"  # pseudo-source for manufacturer production arrivals
PATIENTS = "__patients__"  # pseudo-customer for health-center patient demand


@dataclass(frozen=True)
class Agent:
    id: str
    role: str
    controlled: bool = False


@dataclass(frozen=True)
class Disruption:
    target: str
    start_week: int
    end_week: int
    capacity_fraction: float

    def active(self, week: int) -> bool:
        return self.start_week <= week <= self.end_week


@dataclass(frozen=True)
class Scenario:
    agents: tuple[Agent, ...]
    links: tuple[tuple[str, str], ...]  # (supplier, customer)
    demand: dict[str, int]  # per health-center constant weekly patient demand
    order_up_to: dict[str, int]  # per agent order-up-to level (manufacturers: production target)
    capacity: dict[str, int]  # per manufacturer baseline weekly production capacity
    holding_cost: int = 1
    stockout_cost: int = 10
    revenue_per_unit: int = 5
    trust_smoothing: float = 0.2
    trust_floor: float = 0.05
    trust_initial: float = 1.0
    hc_split: dict[str, str] = field(default_factory=dict)  # health-center -> equal|trust
    allocation_default: str = "proportional"
    lead_time_weeks: int = 2
    start_week: int = 17
    disruptions: tuple[Disruption, ...] = ()
    seed: int = 0

    # -- derived topology helpers ------------------------------------

    def agent(self, agent_id: str) -> Agent:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise KeyError(agent_id)

    def role_ids(self, role: str) -> list[str]:
        return [a.id for a in self.agents if a.role == role]

    def suppliers_of(self, agent_id: str) -> list[str]:
        return [s for s, c in self.links if c == agent_id]

    def customers_of(self, agent_id: str) -> list[str]:
        return [c for s, c in self.links if s == agent_id]

    @property
    def controlled_id(self) -> str | None:
        ids = [a.id for a in self.agents if a.controlled]
        return ids[0] if ids else None

    def effective_capacity(self, mn_id: str, week: int) -> int:
        cap = self.capacity[mn_id]
        for d in self.disruptions:
            if d.target == mn_id and d.active(week):
                cap = min(cap, int(d.capacity_fraction * self.capacity[mn_id] + 1e-9))
        return cap

    def fingerprint(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True, default=list)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def without_control(self) -> "Scenario":
        return replace(self, agents=tuple(replace(a, controlled=False) for a in self.agents))

    def with_disruption_target(self, target: str | None) -> "Scenario":
        """Retarget the scenario's (single) disruption, or drop it."""
        if target is None:
            return replace(self, disruptions=())
        if len(self.disruptions) != 1:
            raise ConfigError("retargeting requires exactly one disruption entry")
        return replace(self, disruptions=(replace(self.disruptions[0], target=target),))


def _has_cycle(agents: list[str], links: list[tuple[str, str]]) -> bool:
    out = {a: [] for a in agents}
    for s, c in links:
        out[s].append(c)
    state: dict[str, int] = {}

    def visit(n: str) -> bool:
        if state.get(n) == 1:
            return True
        if state.get(n) == 2:
            return False
        state[n] = 1
        if any(visit(m) for m in out[n]):
            return True
        state[n] = 2
        return False

    return any(visit(a) for a in agents)


def validate_scenario(sc: Scenario) -> None:
    ids = [a.id for a in sc.agents]
    if len(set(ids)) != len(ids):
        raise ConfigError("duplicate agent ids")
    for a in sc.agents:
        if a.role not in ROLES:
            raise ConfigError(f"unknown role {a.role!r} for agent {a.id}")
    for s, c in sc.links:
        if s not in ids or c not in ids:
            raise ConfigError(f"link ({s}, {c}) references unknown agent")
    if _has_cycle(ids, list(sc.links)):
        raise ConfigError("supply graph has a cycle")
    for a in sc.agents:
        if a.role != "manufacturer" and not sc.suppliers_of(a.id):
            raise ConfigError(f"agent {a.id} has no supplier")
        if a.role == "manufacturer" and sc.suppliers_of(a.id):
            raise ConfigError(f"manufacturer {a.id} cannot have a supplier")
    if sum(1 for a in sc.agents if a.controlled) > 1:
        raise ConfigError("at most one externally controlled agent is supported")
    for hc in sc.role_ids("health-center"):
        if hc not in sc.demand:
            raise ConfigError(f"missing demand for {hc}")
        if sc.hc_split.get(hc, "equal") not in ("equal", "trust"):
            raise ConfigError(f"bad split mode for {hc}")
    for aid in ids:
        if aid not in sc.order_up_to:
            raise ConfigError(f"missing order-up-to level for {aid}")
    for mn in sc.role_ids("manufacturer"):
        if mn not in sc.capacity:
            raise ConfigError(f"missing capacity for {mn}")
    numbers = (
        list(sc.demand.values()) + list(sc.order_up_to.values()) + list(sc.capacity.values())
        + [sc.holding_cost, sc.stockout_cost, sc.revenue_per_unit]
    )
    if any(v < 0 for v in numbers):
        raise ConfigError("negative parameter")
    if not 0.0 < sc.trust_smoothing < 1.0:
        raise ConfigError("trust smoothing must lie in (0, 1)")
    if not 0.0 <= sc.trust_floor < 1.0:
        raise ConfigError("trust floor must lie in [0, 1)")
    for d in sc.disruptions:
        if d.target not in sc.role_ids("manufacturer"):
            raise ConfigError(f"disruption targets non-manufacturer {d.target}")
        if d.start_week > d.end_week:
            raise ConfigError("disruption start after end")
        if not 0.0 <= d.capacity_fraction <= 1.0:
            raise ConfigError("capacity fraction outside [0, 1]")
    if sc.lead_time_weeks != 2:
        raise ConfigError("only the two-week order lead time is supported")


def scenario_from_dict(doc: dict) -> Scenario:
    if doc.get("schema_version") != SCENARIO_SCHEMA_VERSION:
        raise ConfigError(f"unsupported scenario schema_version {doc.get('schema_version')!r}")
    try:
        topo = doc["topology"]
        agents = tuple(
            Agent(a["id"], a["role"], bool(a.get("controlled", False))) for a in topo["agents"]
        )
        links = tuple((s, c) for s, c in topo["links"])
        disruptions = tuple(
            Disruption(d["target"], int(d["start_week"]), int(d["end_week"]),
                       float(d["capacity_fraction"]))
            for d in doc.get("disruptions", [])
        )
        costs = doc.get("costs", {})
        trust = doc.get("trust", {})
        sc = Scenario(
            agents=agents,
            links=links,
            demand={k: int(v) for k, v in doc["demand"].items()},
            order_up_to={k: int(v) for k, v in doc["order_up_to"].items()},
            capacity={k: int(v) for k, v in doc.get("capacity", {}).items()},
            holding_cost=int(costs.get("holding", 1)),
            stockout_cost=int(costs.get("stockout", 10)),
            revenue_per_unit=int(costs.get("revenue", 5)),
            trust_smoothing=float(trust.get("smoothing", 0.2)),
            trust_floor=float(trust.get("floor", 0.05)),
            trust_initial=float(trust.get("initial", 1.0)),
            hc_split=dict(doc.get("hc_split", {})),
            allocation_default=doc.get("allocation_default", "proportional"),
            lead_time_weeks=int(doc.get("lead_time_weeks", 2)),
            start_week=int(doc.get("start_week", 17)),
            disruptions=disruptions,
            seed=int(doc.get("seed", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed scenario document: {exc}") from exc
    validate_scenario(sc)
    return sc


def load_scenario(path: str | Path) -> Scenario:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from exc
    return scenario_from_dict(doc)


def default_scenario(demand: int = 40, controlled: bool = True,
                     disruption_target: str | None = "MN1") -> Scenario:
    """The shipped six-agent network, calibrated to be stationary pre-disruption.

    Two manufacturers each feed one wholesaler; both health centers order
    from both wholesalers.  HC1 splits by delivery trust, HC2 always
    splits equally.  Order-up-to levels keep every agent's weekly flows
    constant (zero backlog) until a disruption bites.
    """
    agents = (
        Agent("MN1", "manufacturer"),
        Agent("MN2", "manufacturer"),
        Agent("WS1", "wholesaler", controlled=controlled),
        Agent("WS2", "wholesaler"),
        Agent("HC1", "health-center"),
        Agent("HC2", "health-center"),
    )
    links = (
        ("MN1", "WS1"), ("MN2", "WS2"),
        ("WS1", "HC1"), ("WS1", "HC2"),
        ("WS2", "HC1"), ("WS2", "HC2"),
    )
    # per wholesaler steady throughput = demand (half of each HC's order)
    disruptions: tuple[Disruption, ...] = ()
    if disruption_target is not None:
        disruptions = (Disruption(disruption_target, 28, 33, 0.05),)
    sc = Scenario(
        agents=agents,
        links=links,
        demand={"HC1": demand, "HC2": demand},
        order_up_to={
            "HC1": 3 * demand, "HC2": 3 * demand,
            "WS1": 3 * demand, "WS2": 3 * demand,
            "MN1": int(1.5 * demand), "MN2": int(1.5 * demand),
        },
        capacity={"MN1": 2 * demand, "MN2": 2 * demand},
        hc_split={"HC1": "trust", "HC2": "equal"},
        disruptions=disruptions,
    )
    validate_scenario(sc)
    return sc


def scenario_to_dict(sc: Scenario) -> dict:
    return {
        "schema_version": SCENARIO_SCHEMA_VERSION,
        "seed": sc.seed,
        "topology": {
            "agents": [
                {"id": a.id, "role": a.role, **({"controlled": True} if a.controlled else {})}
                for a in sc.agents
            ],
            "links": [list(l) for l in sc.links],
        },
        "demand": dict(sc.demand),
        "order_up_to": dict(sc.order_up_to),
        "capacity": dict(sc.capacity),
        "costs": {
            "holding": sc.holding_cost,
            "stockout": sc.stockout_cost,
            "revenue": sc.revenue_per_unit,
        },
        "trust": {
            "smoothing": sc.trust_smoothing,
            "floor": sc.trust_floor,
            "initial": sc.trust_initial,
        },
        "hc_split": dict(sc.hc_split),
        "allocation_default": sc.allocation_default,
        "lead_time_weeks": sc.lead_time_weeks,
        "start_week": sc.start_week,
        "disruptions": [
            {
                "target": d.target,
                "start_week": d.start_week,
                "end_week": d.end_week,
                "capacity_fraction": d.capacity_fraction,
            }
            for d in sc.disruptions
        ],
    }
