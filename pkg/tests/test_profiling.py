import pytest

from supplygame.errors import AnalysisError, DegenerateFitError
from supplygame.analysis.hmm import DiscreteHMM
from supplygame.analysis.profiling import (
    FOLLOW,
    OVER,
    UNDER,
    OrderDecision,
    DeviationSequence,
    deviation_sequences,
    filter_outliers,
    load_decision_logs,
    profile_players,
)
from supplygame.bots import BotSpec
from supplygame.harness import CohortPlan, run_cohort
from supplygame.sim.scenario import default_scenario


def make_decisions(orders_by_week):
    return [OrderDecision(week=w, order=o, suggestion=s)
            for w, (o, s) in orders_by_week.items()]


def full_season(order_fn):
    """One decision per gameplay week 21..55 with suggestion 40."""
    return [OrderDecision(week=w, order=order_fn(w, 40), suggestion=40)
            for w in range(21, 56)]


@pytest.fixture(scope="module")
def cohort_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("cohort") / "data"
    plan = (CohortPlan()
            .add("follower", BotSpec("follower"), 4)
            .add("hoarder", BotSpec("hoarder"), 4)
            .add("reactor", BotSpec("reactor"), 4)
            .add("outlier", BotSpec("hoarder", multiplier=1000.0, start_week=30), 2))
    manifest = run_cohort(plan, "study2", out, default_scenario(), base_seed=400)
    return out, manifest


class TestDeviationSequences:
    def test_relative_deviation_and_discretisation(self):
        decisions = make_decisions({21: (40, 40), 22: (60, 40), 23: (20, 40),
                                    24: (41, 40), 25: (5, 0)})
        seq = DeviationSequence.from_decisions("p", decisions)
        assert seq.deviations[0] == 0.0
        assert seq.deviations[1] == pytest.approx(0.5)
        assert seq.emissions == [FOLLOW, OVER, UNDER, FOLLOW, OVER]
        # suggestion 0 guards the denominator at 1
        assert seq.deviations[4] == pytest.approx(5.0)

    def test_restricted_to_gameplay_weeks(self):
        decisions = make_decisions({17: (40, 40), 21: (40, 40), 55: (40, 40)})
        seqs = deviation_sequences({"p": decisions})
        assert seqs[0].weeks == [21, 55]


class TestFilterOutliers:
    def test_clean_bots_no_exclusions(self):
        players = {f"p{i}": full_season(lambda w, s: s) for i in range(5)}
        kept, report = filter_outliers(players)
        assert len(kept) == 5
        assert report.excluded == {}

    def test_extreme_order_excluded_with_reason(self):
        players = {
            "clean": full_season(lambda w, s: s),
            "wild": full_season(lambda w, s: 40000 if w == 30 else s),
        }
        kept, report = filter_outliers(players)
        assert sorted(kept) == ["clean"]
        assert "40000" in report.excluded["wild"]
        assert "week 30" in report.excluded["wild"]

    def test_incomplete_session_excluded(self):
        partial = [d for d in full_season(lambda w, s: s) if d.week < 40]
        kept, report = filter_outliers(
            {"quit": partial, "done": full_season(lambda w, s: s)})
        assert sorted(kept) == ["done"]
        assert report.excluded["quit"] == "incomplete session"

    def test_explicit_completeness_flags_respected(self):
        players = {"p": full_season(lambda w, s: s)}
        kept, report = filter_outliers(players, complete={"p": False})
        assert kept == {}


class TestHMM:
    def test_decode_recovers_planted_modes(self):
        model = DiscreteHMM(n_states=3, n_symbols=3, seed=1)
        sequences = ([[FOLLOW] * 35] * 5
                     + [[OVER] * 35] * 5
                     + [[FOLLOW] * 7 + [OVER] * 28] * 5)
        model.fit(sequences)
        mapping = model.state_symbol_map()
        assert {FOLLOW, OVER} <= set(mapping.values())
        decoded = [mapping[s] for s in model.decode([FOLLOW] * 7 + [OVER] * 28)]
        assert decoded == [FOLLOW] * 7 + [OVER] * 28

    def test_decode_with_all_three_modes_present(self):
        model = DiscreteHMM(n_states=3, n_symbols=3, seed=1)
        sequences = ([[UNDER] * 20] * 3 + [[FOLLOW] * 20] * 3 + [[OVER] * 20] * 3
                     + [[FOLLOW] * 5 + [UNDER] * 5 + [OVER] * 10] * 3)
        model.fit(sequences)
        mapping = model.state_symbol_map()
        assert set(mapping.values()) == {UNDER, FOLLOW, OVER}
        mixed = [FOLLOW] * 5 + [UNDER] * 5 + [OVER] * 10
        decoded = [mapping[s] for s in model.decode(mixed)]
        assert decoded == mixed

    def test_fit_is_deterministic_in_seed(self):
        sequences = [[FOLLOW] * 10 + [OVER] * 10, [OVER] * 20, [FOLLOW] * 20]
        a = DiscreteHMM(3, 3, seed=9)
        b = DiscreteHMM(3, 3, seed=9)
        a.fit(sequences)
        b.fit(sequences)
        assert a.emission.tolist() == b.emission.tolist()
        assert a.transition.tolist() == b.transition.tolist()

    def test_rejects_foreign_symbols(self):
        with pytest.raises(AnalysisError, match="alphabet"):
            DiscreteHMM(3, 3).fit([[0, 1, 5]])


class TestProfilePlayers:
    def test_synthetic_archetypes_recovered(self):
        players = {}
        for i in range(4):
            players[f"fol{i}"] = full_season(lambda w, s: s)
            players[f"hoa{i}"] = full_season(lambda w, s: round(1.5 * s))
            players[f"rea{i}"] = full_season(
                lambda w, s: round(1.5 * s) if w >= 28 else s)
        result = profile_players(players, seed=0)
        for i in range(4):
            assert result.profiles[f"fol{i}"] == "follower"
            assert result.profiles[f"hoa{i}"] == "hoarder"
            assert result.profiles[f"rea{i}"] == "reactor"

    def test_deterministic_under_fixed_seed(self):
        players = {f"p{i}": full_season(lambda w, s: s if i % 2 else round(1.5 * s))
                   for i in range(6)}
        players["r1"] = full_season(lambda w, s: round(1.5 * s) if w >= 28 else s)
        a = profile_players(players, seed=3)
        b = profile_players(players, seed=3)
        assert a.profiles == b.profiles

    def test_too_few_ordering_weeks_rejected(self):
        short = [OrderDecision(week=w, order=40, suggestion=40) for w in range(21, 30)]
        with pytest.raises(AnalysisError, match="ordering weeks"):
            profile_players({"p": short})

    def test_degenerate_collapse_reported(self):
        # a single repeated symbol for every player cannot support three
        # distinct modes; the model must say so rather than mislabel
        players = {f"p{i}": full_season(lambda w, s: s) for i in range(6)}
        with pytest.raises((DegenerateFitError, AnalysisError)):
            profile_players(players, seed=0)


class TestCohortRoundTrip:
    def test_logs_yield_decisions_and_completeness(self, cohort_dir):
        out, manifest = cohort_dir
        decisions, complete = load_decision_logs(out)
        assert len(decisions) == 14
        assert all(complete.values())
        lengths = {len(v) for v in decisions.values()}
        assert lengths == {39}  # 4 tutorial + 35 gameplay orders

    def test_planted_profiles_recovered_from_logs(self, cohort_dir):
        out, manifest = cohort_dir
        decisions, complete = load_decision_logs(out)
        kept, report = filter_outliers(decisions, complete)
        planted = {s["session"]: s["label"] for s in manifest["sessions"]}

        outliers = {sid for sid, label in planted.items() if label == "outlier"}
        assert set(report.excluded) == outliers

        result = profile_players(kept, seed=0)
        hits = sum(result.profiles[sid] == planted[sid] for sid in kept)
        assert hits == len(kept)
