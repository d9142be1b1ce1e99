"""Behavioral profiling of players from their ordering decisions.

The pipeline mirrors the published method: relative deviations from the
order suggestion are discretised into under/follow/over emissions, a
three-state HMM is fit to the cohort and each player's most likely
response-mode path decoded, players are clustered on position-wise mode
mismatch with k-medoids, and the three clusters are labelled by simple
behavioral signatures:

* Hoarder  -- the cluster over-ordering most often before the
  disruption notification;
* Reactor  -- over-ordering concentrated after the notification week;
* Follower -- mostly follow modes throughout.

Outlier filtering happens before any of this: players with an order
beyond ten times the suggestion, or with incomplete sessions, are
excluded with a reason.
"""

from __future__ import annotations

from dataclasses import dataclass

from pathlib import Path

from supplygame.errors import AnalysisError, DegenerateFitError
from supplygame.analysis.hmm import DiscreteHMM
from supplygame.protocol import Schedule
from supplygame.service.events import read_events

PROFILES = ("hoarder", "reactor", "follower")
MODES = ("under", "follow", "over")
UNDER, FOLLOW, OVER = 0, 1, 2

DEVIATION_THRESHOLD = 0.05  # |relative deviation| below this counts as following
OUTLIER_ORDER_MULTIPLE = 10
MIN_ORDERING_WEEKS = 20
FOLLOW_LABEL_CUTOFF = 0.8


@dataclass
class OrderDecision:
    week: int
    order: int
    suggestion: int

    def deviation(self) -> float:
        return (self.order - self.suggestion) / max(1, self.suggestion)


@dataclass
class DeviationSequence:
    player: str
    weeks: list[int]
    deviations: list[float]
    emissions: list[int]  # discretised deviations
    modes: list[int] | None = None  # decoded response modes

    @classmethod
    def from_decisions(cls, player: str, decisions: list[OrderDecision],
                       threshold: float = DEVIATION_THRESHOLD) -> "DeviationSequence":
        ordered = sorted(decisions, key=lambda d: d.week)
        devs = [d.deviation() for d in ordered]
        emissions = [
            OVER if dv > threshold else UNDER if dv < -threshold else FOLLOW
            for dv in devs
        ]
        return cls(player=player,
                   weeks=[d.week for d in ordered],
                   deviations=devs,
                   emissions=emissions)


@dataclass
class ExclusionReport:
    excluded: dict[str, str]  # player -> reason

    def reasons(self) -> list[tuple[str, str]]:
        return sorted(self.excluded.items())


def decisions_from_log(path: str | Path) -> tuple[str, list[OrderDecision], bool]:
    """Extract a session's ordering decisions from its event log.

    Returns (session id, decisions, completed), where completed means
    the session reached its debrief.
    """
    events = read_events(path)
    if not events:
        raise AnalysisError(f"empty session log {path}")
    session_id = events[0].session
    decisions = [
        OrderDecision(week=ev.payload["week"], order=ev.payload["quantity"],
                      suggestion=ev.payload["suggestion"])
        for ev in events if ev.kind == "order-submitted"
    ]
    completed = any(ev.kind == "debriefed" for ev in events)
    return session_id, decisions, completed


def load_decision_logs(data_dir: str | Path) -> tuple[dict[str, list[OrderDecision]],
                                                      dict[str, bool]]:
    """Load every session log under a cohort data directory."""
    sessions_dir = Path(data_dir) / "sessions"
    if not sessions_dir.is_dir():
        raise AnalysisError(f"no sessions directory under {data_dir}")
    decisions: dict[str, list[OrderDecision]] = {}
    complete: dict[str, bool] = {}
    for path in sorted(sessions_dir.glob("*.jsonl")):
        sid, decs, done = decisions_from_log(path)
        decisions[sid] = decs
        complete[sid] = done
    if not decisions:
        raise AnalysisError(f"no session logs under {sessions_dir}")
    return decisions, complete


def deviation_sequences(decisions_by_player: dict[str, list[OrderDecision]],
                        schedule: Schedule | None = None,
                        threshold: float = DEVIATION_THRESHOLD) -> list[DeviationSequence]:
    """One sequence per player over gameplay ordering weeks."""
    schedule = schedule or Schedule()
    out = []
    for player in sorted(decisions_by_player):
        in_play = [d for d in decisions_by_player[player]
                   if schedule.in_gameplay(d.week)]
        out.append(DeviationSequence.from_decisions(player, in_play, threshold))
    return out


def filter_outliers(decisions_by_player: dict[str, list[OrderDecision]],
                    complete: dict[str, bool] | None = None,
                    schedule: Schedule | None = None,
                    ) -> tuple[dict[str, list[OrderDecision]], ExclusionReport]:
    """Drop extreme or incomplete players before profiling.

    ``complete`` marks sessions that finished (reached debrief); when
    omitted, completeness means one decision for every gameplay week.
    """
    schedule = schedule or Schedule()
    expected_weeks = set(schedule.gameplay_weeks)
    kept: dict[str, list[OrderDecision]] = {}
    excluded: dict[str, str] = {}
    for player in sorted(decisions_by_player):
        decisions = decisions_by_player[player]
        in_play = [d for d in decisions if schedule.in_gameplay(d.week)]
        weeks = {d.week for d in in_play}
        finished = complete.get(player, False) if complete is not None else weeks == expected_weeks
        if not finished or not expected_weeks.issubset(weeks):
            excluded[player] = "incomplete session"
            continue
        extreme = [d for d in in_play if d.order > OUTLIER_ORDER_MULTIPLE * d.suggestion]
        if extreme:
            worst = max(extreme, key=lambda d: d.order)
            excluded[player] = (
                f"order {worst.order} over {OUTLIER_ORDER_MULTIPLE}x suggestion "
                f"{worst.suggestion} in week {worst.week}")
            continue
        kept[player] = decisions
    return kept, ExclusionReport(excluded)


def _mode_distance(a: list[int], b: list[int]) -> float:
    if len(a) != len(b):
        raise AnalysisError("mode sequences must align week by week")
    if not a:
        return 0.0
    return sum(1 for x, y in zip(a, b) if x != y) / len(a)


def _k_medoids(dist: list[list[float]], k: int, max_iter: int = 100) -> list[int]:
    """Deterministic PAM: greedy build, then swap until stable."""
    n = len(dist)
    if n < k:
        raise AnalysisError(f"cannot form {k} clusters from {n} players")
    medoids = [min(range(n), key=lambda i: (sum(dist[i]), i))]
    while len(medoids) < k:
        best, best_cost = None, None
        for cand in range(n):
            if cand in medoids:
                continue
            cost = sum(min(dist[i][m] for m in medoids + [cand]) for i in range(n))
            if best_cost is None or cost < best_cost - 1e-12:
                best, best_cost = cand, cost
        medoids.append(best)
    medoids.sort()

    def assignment():
        return [min(range(k), key=lambda c: (dist[i][medoids[c]], c)) for i in range(n)]

    def total_cost(meds):
        return sum(min(dist[i][m] for m in meds) for i in range(n))

    cost = total_cost(medoids)
    for _ in range(max_iter):
        improved = False
        for ci in range(k):
            for cand in range(n):
                if cand in medoids:
                    continue
                trial = sorted(medoids[:ci] + [cand] + medoids[ci + 1:])
                trial_cost = total_cost(trial)
                if trial_cost < cost - 1e-12:
                    medoids, cost = trial, trial_cost
                    improved = True
        if not improved:
            break
    return assignment()


def _label_clusters(sequences: list[DeviationSequence], assignment: list[int],
                    k: int, schedule: Schedule) -> dict[int, str]:
    stats = []
    for c in range(k):
        members = [s for s, a in zip(sequences, assignment) if a == c]
        if not members:
            raise DegenerateFitError(f"cluster {c} is empty",
                                     {"assignment": assignment})
        follow = pre_over = post_over = pre_n = post_n = total = 0
        for s in members:
            for week, mode in zip(s.weeks, s.modes):
                total += 1
                follow += mode == FOLLOW
                if week < schedule.notification_week:
                    pre_n += 1
                    pre_over += mode == OVER
                else:
                    post_n += 1
                    post_over += mode == OVER
        stats.append({
            "follow": follow / total,
            "pre_over": pre_over / max(1, pre_n),
            "post_over": post_over / max(1, post_n),
        })
    labels: dict[int, str] = {}
    follower = max(range(k), key=lambda c: (stats[c]["follow"], -c))
    labels[follower] = "follower"
    rest = [c for c in range(k) if c != follower]
    hoarder = max(rest, key=lambda c: (stats[c]["pre_over"], -c))
    labels[hoarder] = "hoarder"
    for c in rest:
        if c != hoarder:
            labels[c] = "reactor"
    return labels


@dataclass
class ProfilingResult:
    profiles: dict[str, str]  # player -> profile label
    modes: dict[str, list[int]]
    clusters: dict[str, int]
    cluster_labels: dict[int, str]
    log_likelihood: float


def profile_players(decisions_by_player: dict[str, list[OrderDecision]],
                    schedule: Schedule | None = None,
                    seed: int = 0,
                    threshold: float = DEVIATION_THRESHOLD,
                    n_clusters: int = 3) -> ProfilingResult:
    """Infer a behavioral profile per player from clean decision logs.

    Callers filter outliers first; players with fewer than
    ``MIN_ORDERING_WEEKS`` gameplay decisions are rejected outright.
    """
    schedule = schedule or Schedule()
    sequences = deviation_sequences(decisions_by_player, schedule, threshold)
    for s in sequences:
        if len(s.emissions) < MIN_ORDERING_WEEKS:
            raise AnalysisError(
                f"player {s.player} has {len(s.emissions)} ordering weeks, "
                f"need {MIN_ORDERING_WEEKS}")

    model = DiscreteHMM(n_states=3, n_symbols=3, seed=seed)
    ll = model.fit([s.emissions for s in sequences])
    mode_of_state = model.state_symbol_map()
    observed = {sym for s in sequences for sym in s.emissions}
    if not observed <= set(mode_of_state.values()):
        # states collapsed: some response mode present in the data has no
        # state left to decode it
        raise DegenerateFitError(
            "hidden states collapsed onto fewer modes than the data shows",
            {"state_symbol_map": mode_of_state, "emission": model.emission.tolist()},
        )
    for s in sequences:
        s.modes = [mode_of_state[st] for st in model.decode(s.emissions)]

    dist = [[_mode_distance(a.modes, b.modes) for b in sequences] for a in sequences]
    assignment = _k_medoids(dist, n_clusters)
    labels = _label_clusters(sequences, assignment, n_clusters, schedule)
    return ProfilingResult(
        profiles={s.player: labels[a] for s, a in zip(sequences, assignment)},
        modes={s.player: s.modes for s in sequences},
        clusters={s.player: a for s, a in zip(sequences, assignment)},
        cluster_labels=labels,
        log_likelihood=ll,
    )
