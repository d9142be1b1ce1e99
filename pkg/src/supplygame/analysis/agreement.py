"""Inter-rater agreement (Fleiss' kappa) for fixed-size rater panels."""

from __future__ import annotations

from collections import Counter, defaultdict

from supplygame.errors import AnalysisError
from supplygame.analysis.codebook import SA_LEVELS, CodedComment


def fleiss_kappa(ratings: list[list[int]], n_raters: int) -> float:
    """Fleiss' kappa over an item x category count matrix.

    ``ratings[i][j]`` is how many of the ``n_raters`` raters put item
    ``i`` into category ``j``; every row must sum to ``n_raters``.
    """
    if not ratings:
        raise AnalysisError("no items to rate")
    if n_raters < 2:
        raise AnalysisError("Fleiss' kappa needs at least two raters")
    n_items = len(ratings)
    n_cats = len(ratings[0])
    for i, row in enumerate(ratings):
        if len(row) != n_cats:
            raise AnalysisError("ragged ratings matrix")
        if sum(row) != n_raters:
            raise AnalysisError(f"item {i} rated by {sum(row)} raters, expected {n_raters}")

    p_observed = sum(
        (sum(v * v for v in row) - n_raters) / (n_raters * (n_raters - 1))
        for row in ratings
    ) / n_items
    totals = [sum(row[j] for row in ratings) for j in range(n_cats)]
    grand = n_items * n_raters
    p_chance = sum((t / grand) ** 2 for t in totals)
    if p_chance == 1.0:
        return 1.0  # every rating in one category: agreement is total
    return (p_observed - p_chance) / (1.0 - p_chance)


def level_rating_matrix(comments: list[CodedComment],
                        categories: tuple[str, ...] = (*SA_LEVELS, "none"),
                        ) -> tuple[list[list[int]], int]:
    """Build a Fleiss matrix from per-rater coded comments.

    Item = one (player, week) prompt response; a rater's category is the
    most frequent SA level among their tuples for it ("none" when they
    assigned no code; ties resolve in codebook level order).  Only items
    rated by the full rater panel are kept.
    """
    raters = sorted({c.rater for c in comments})
    if len(raters) < 2:
        raise AnalysisError("need codings from at least two raters")
    by_item: dict[tuple[str, int], dict[str, str]] = defaultdict(dict)
    for c in comments:
        levels = Counter(code.level for code in c.codes)
        if levels:
            best = max(levels.items(), key=lambda kv: (kv[1], -categories.index(kv[0])))
            category = best[0]
        else:
            category = "none"
        by_item[(c.player, c.week)][c.rater] = category
    matrix = []
    for key in sorted(by_item):
        votes = by_item[key]
        if len(votes) != len(raters):
            continue
        row = [0] * len(categories)
        for cat in votes.values():
            row[categories.index(cat)] += 1
        matrix.append(row)
    if not matrix:
        raise AnalysisError("no item was rated by every rater")
    return matrix, len(raters)
