"""Per-week descriptive series over coded comments."""

from __future__ import annotations

import statistics
from collections import defaultdict
from dataclasses import dataclass

from supplygame.errors import AnalysisError
from supplygame.analysis.codebook import SA_LEVELS, DEFAULT_MEETING_WEEKS, CodedComment


def count_ratio_series(comments: list[CodedComment], group_of: dict[str, str],
                       group_sizes: dict[str, int],
                       weeks: tuple[int, ...] = DEFAULT_MEETING_WEEKS,
                       ) -> dict[str, dict[str, list[float]]]:
    """Codes per player, per group, per SA level, per meeting week.

    The value at a week is the number of code tuples at that level in
    the group's comments divided by the group size, so summing a level's
    series times the group size recovers the contingency count.
    """
    for g, size in group_sizes.items():
        if size <= 0:
            raise AnalysisError(f"group {g!r} has non-positive size")
    raw: dict[str, dict[str, dict[int, int]]] = defaultdict(
        lambda: {lvl: defaultdict(int) for lvl in SA_LEVELS})
    for c in comments:
        g = group_of.get(c.player)
        if g is None:
            raise AnalysisError(f"player {c.player} has no group")
        for code in c.codes:
            raw[g][code.level][c.week] += 1
    out: dict[str, dict[str, list[float]]] = {}
    for g, size in group_sizes.items():
        out[g] = {
            lvl: [raw[g][lvl].get(w, 0) / size for w in weeks]
            for lvl in SA_LEVELS
        }
    return out


@dataclass
class WordStats:
    mean_words: float
    median_words: float
    iqr_words: float
    unanswered_rate: float
    per_week_mean: dict[int, float]

    def as_dict(self) -> dict:
        return self.__dict__.copy()


def word_stats(comments: list[CodedComment]) -> WordStats:
    """Whitespace word counts per comment; empty responses count as unanswered."""
    if not comments:
        raise AnalysisError("no comments")
    counts = [len(c.text.split()) for c in comments]
    unanswered = sum(1 for c in comments if not c.answered)
    by_week: dict[int, list[int]] = defaultdict(list)
    for c, n in zip(comments, counts):
        by_week[c.week].append(n)
    if len(counts) >= 4:
        q1, _, q3 = statistics.quantiles(counts, n=4, method="inclusive")
        iqr = q3 - q1
    else:
        iqr = 0.0
    return WordStats(
        mean_words=statistics.fmean(counts),
        median_words=float(statistics.median(counts)),
        iqr_words=float(iqr),
        unanswered_rate=unanswered / len(comments),
        per_week_mean={w: statistics.fmean(v) for w, v in sorted(by_week.items())},
    )
