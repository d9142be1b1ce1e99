"""Inventory and sharing policies used by simulated agents.

All quantities are integer units.  Proportional integer splits use the
largest-remainder method with ties broken by lower agent id, so every
split is deterministic and sums exactly to its target.
"""

from __future__ import annotations

from supplygame.errors import DecisionError

ALLOCATION_POLICIES = ("hc1_first", "hc2_first", "proportional")


def order_up_to_suggestion(level: int, on_hand: int, on_order: int, backlog: int) -> int:
    """Suggested order under an order-up-to policy.

    ``on_order`` covers both in-transit units and units owed by the
    supplier (accepted but not yet shipped).  Backlog owed to customers
    counts against the inventory position.
    """
    if min(level, on_hand, on_order, backlog) < 0:
        raise ValueError("order-up-to inputs must be non-negative")
    position = on_hand + on_order - backlog
    return max(0, level - position)


def largest_remainder(total: int, weights: dict[str, float]) -> dict[str, int]:
    """Split ``total`` integer units proportionally to ``weights``.

    Floors the exact quotas, then hands out the remaining units in order
    of descending fractional part, lower id first on ties.
    """
    if total < 0:
        raise ValueError("total must be non-negative")
    if total == 0:
        return {k: 0 for k in weights}
    weight_sum = sum(weights.values())
    if weight_sum <= 0:
        raise ValueError("weights must sum to a positive value")
    quotas = {k: total * w / weight_sum for k, w in weights.items()}
    out = {k: int(q) for k, q in quotas.items()}
    leftovers = total - sum(out.values())
    by_remainder = sorted(weights, key=lambda k: (-(quotas[k] - out[k]), k))
    for k in by_remainder[:leftovers]:
        out[k] += 1
    return out


def trust_shares(scores: dict[str, float]) -> dict[str, float]:
    """Order shares proportional to trust scores (normalised to sum 1)."""
    total = sum(scores.values())
    if total <= 0:
        raise ValueError("trust scores must sum to a positive value")
    return {k: v / total for k, v in scores.items()}


def split_demand(total: int, suppliers: list[str], mode: str,
                 trust: dict[str, float] | None = None) -> dict[str, int]:
    """Split a health-center order across its wholesalers.

    ``mode`` is ``"equal"`` (always 50/50, largest remainder on odd
    totals) or ``"trust"`` (proportional to current trust scores).
    """
    if total < 0:
        raise ValueError("demand must be non-negative")
    if mode == "equal":
        weights = {s: 1.0 for s in suppliers}
    elif mode == "trust":
        if trust is None:
            raise ValueError("trust mode requires trust scores")
        weights = {s: trust[s] for s in suppliers}
    else:
        raise ValueError(f"unknown split mode {mode!r}")
    return largest_remainder(total, weights)


def trust_update(score: float, fill_rate: float, smoothing: float, floor: float) -> float:
    """Exponential moving average of observed fill rate, clamped to [floor, 1]."""
    if not 0.0 <= fill_rate <= 1.0:
        raise ValueError(f"fill rate {fill_rate} outside [0, 1]")
    if not 0.0 < smoothing < 1.0:
        raise ValueError("smoothing factor must lie in (0, 1)")
    new = (1.0 - smoothing) * score + smoothing * fill_rate
    return min(1.0, max(floor, new))


def allocate(on_hand: int, demands: dict[str, int], policy: str) -> dict[str, int]:
    """Divide scarce on-hand stock across per-customer demands.

    The allocations sum to ``min(on_hand, total demand)`` and no customer
    receives more than it asked for.  Priority policies serve the named
    customer fully before the other; ``proportional`` uses the
    largest-remainder split of available stock over demands.
    """
    if on_hand < 0 or any(d < 0 for d in demands.values()):
        raise ValueError("allocation inputs must be non-negative")
    total = sum(demands.values())
    available = min(on_hand, total)
    if available == total:
        return dict(demands)
    if policy == "proportional":
        positive = {k: d for k, d in demands.items() if d > 0}
        out = {k: 0 for k in demands}
        if positive:
            out.update(largest_remainder(available, {k: float(d) for k, d in positive.items()}))
        # largest-remainder quota of available < total never exceeds demand,
        # but guard against custom weights drifting past it
        for k in out:
            out[k] = min(out[k], demands[k])
        return out
    if policy in ("hc1_first", "hc2_first"):
        first = "HC1" if policy == "hc1_first" else "HC2"
        order = sorted(demands, key=lambda k: (k != first, k))
        out = {}
        remaining = available
        for k in order:
            out[k] = min(demands[k], remaining)
            remaining -= out[k]
        return out
    raise DecisionError(f"unknown allocation policy {policy!r}")
