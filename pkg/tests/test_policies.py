import random

import pytest

from supplygame.sim.policies import (
    allocate,
    largest_remainder,
    order_up_to_suggestion,
    split_demand,
    trust_shares,
    trust_update,
)


class TestOrderUpTo:
    def test_hand_computed(self):
        # S=100, on-hand 40, on-order 30, backlog 10 -> position 60, order 40
        assert order_up_to_suggestion(100, 40, 30, 10) == 40

    def test_position_at_level(self):
        assert order_up_to_suggestion(100, 50, 50, 0) == 0

    def test_never_negative(self):
        assert order_up_to_suggestion(100, 200, 50, 0) == 0

    def test_rejects_negative_inputs(self):
        with pytest.raises(ValueError):
            order_up_to_suggestion(100, -1, 0, 0)


class TestSplitDemand:
    def test_equal_split(self):
        assert split_demand(100, ["WS1", "WS2"], "equal") == {"WS1": 50, "WS2": 50}

    def test_equal_split_odd_total_favors_lower_id(self):
        assert split_demand(101, ["WS1", "WS2"], "equal") == {"WS1": 51, "WS2": 50}

    def test_trust_symmetric(self):
        split = split_demand(100, ["WS1", "WS2"], "trust", {"WS1": 1.0, "WS2": 1.0})
        assert split == {"WS1": 50, "WS2": 50}

    def test_trust_proportional(self):
        split = split_demand(100, ["WS1", "WS2"], "trust", {"WS1": 0.25, "WS2": 0.75})
        assert split == {"WS1": 25, "WS2": 75}

    def test_zero_total(self):
        assert split_demand(0, ["WS1", "WS2"], "equal") == {"WS1": 0, "WS2": 0}

    def test_sums_to_total(self):
        rng = random.Random(7)
        for _ in range(200):
            total = rng.randrange(0, 500)
            trust = {"WS1": rng.uniform(0.05, 1), "WS2": rng.uniform(0.05, 1)}
            split = split_demand(total, ["WS1", "WS2"], "trust", trust)
            assert sum(split.values()) == total
            assert all(v >= 0 for v in split.values())


class TestTrust:
    def test_ema_hand_computed(self):
        assert trust_update(1.0, 0.5, 0.2, 0.05) == pytest.approx(0.9)

    def test_fixed_point_at_one(self):
        score = 0.3
        for _ in range(200):
            score = trust_update(score, 1.0, 0.2, 0.05)
        assert score == pytest.approx(1.0, abs=1e-9)

    def test_fixed_point_at_floor(self):
        score = 1.0
        for _ in range(200):
            score = trust_update(score, 0.0, 0.2, 0.05)
        assert score == pytest.approx(0.05, abs=1e-9)

    def test_monotone_in_fill_rate(self):
        rng = random.Random(3)
        for _ in range(200):
            old = rng.uniform(0.05, 1.0)
            lo, hi = sorted((rng.random(), rng.random()))
            assert trust_update(old, lo, 0.2, 0.05) <= trust_update(old, hi, 0.2, 0.05)

    def test_rejects_out_of_range_fill(self):
        with pytest.raises(ValueError):
            trust_update(0.5, 1.2, 0.2, 0.05)

    def test_shares_sum_to_one(self):
        shares = trust_shares({"WS1": 0.4, "WS2": 0.6})
        assert sum(shares.values()) == pytest.approx(1.0)
        assert shares["WS2"] == pytest.approx(0.6)


class TestAllocate:
    def test_priority_first(self):
        assert allocate(80, {"HC1": 60, "HC2": 40}, "hc1_first") == {"HC1": 60, "HC2": 20}

    def test_priority_second(self):
        assert allocate(80, {"HC1": 60, "HC2": 40}, "hc2_first") == {"HC2": 40, "HC1": 40}

    def test_proportional_exact(self):
        assert allocate(80, {"HC1": 60, "HC2": 40}, "proportional") == {"HC1": 48, "HC2": 32}

    def test_proportional_largest_remainder(self):
        # 79 * 0.6 = 47.4 and 79 * 0.4 = 31.6: the leftover unit goes to HC2
        assert allocate(79, {"HC1": 60, "HC2": 40}, "proportional") == {"HC1": 47, "HC2": 32}

    def test_surplus_ships_in_full(self):
        assert allocate(200, {"HC1": 60, "HC2": 40}, "proportional") == {"HC1": 60, "HC2": 40}

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            allocate(-1, {"HC1": 5}, "proportional")

    def test_completeness_property(self):
        rng = random.Random(11)
        for _ in range(300):
            on_hand = rng.randrange(0, 120)
            demands = {"HC1": rng.randrange(0, 80), "HC2": rng.randrange(0, 80)}
            policy = rng.choice(("hc1_first", "hc2_first", "proportional"))
            out = allocate(on_hand, demands, policy)
            assert sum(out.values()) == min(on_hand, sum(demands.values()))
            assert all(out[k] <= demands[k] for k in demands)
            assert all(v >= 0 for v in out.values())


class TestLargestRemainder:
    def test_deterministic_tie_break(self):
        assert largest_remainder(1, {"b": 1.0, "a": 1.0}) == {"b": 0, "a": 1}

    def test_exact_split_untouched(self):
        assert largest_remainder(30, {"a": 2.0, "b": 1.0}) == {"a": 20, "b": 10}
