from fractions import Fraction

import pytest

from supplygame.errors import AnalysisError
from supplygame.analysis.agreement import fleiss_kappa, level_rating_matrix
from supplygame.analysis.codebook import CodedComment, SACode


# 3 raters x 6 items x 3 categories, value fixed by exact rational
# arithmetic before the implementation existed: kappa = 44/107
HAND_FIXTURE = [
    [3, 0, 0],
    [0, 3, 0],
    [0, 0, 3],
    [2, 1, 0],
    [1, 1, 1],
    [0, 2, 1],
]


def kappa_fraction_oracle(rows, n):
    n_items = len(rows)
    p_obs = sum(
        Fraction(sum(v * v for v in row) - n, n * (n - 1)) for row in rows
    ) / n_items
    totals = [sum(r[j] for r in rows) for j in range(len(rows[0]))]
    grand = n_items * n
    p_chance = sum(Fraction(t, grand) ** 2 for t in totals)
    return (p_obs - p_chance) / (1 - p_chance)


class TestFleissKappa:
    def test_perfect_agreement_is_exactly_one(self):
        rows = [[3, 0, 0], [0, 3, 0], [3, 0, 0], [0, 0, 3]]
        assert fleiss_kappa(rows, 3) == pytest.approx(1.0, abs=0)

    def test_hand_computed_fixture(self):
        oracle = kappa_fraction_oracle(HAND_FIXTURE, 3)
        assert oracle == Fraction(44, 107)
        assert fleiss_kappa(HAND_FIXTURE, 3) == pytest.approx(float(oracle), abs=1e-9)

    def test_chance_level_near_zero(self):
        # a balanced pattern with no category preference stays near zero
        rows = [[2, 1, 0], [0, 2, 1], [1, 0, 2], [2, 0, 1], [1, 2, 0], [0, 1, 2]]
        assert abs(fleiss_kappa(rows, 3)) < 0.15

    def test_total_disagreement_is_negative(self):
        rows = [[1, 1] for _ in range(50)]
        assert fleiss_kappa(rows, 2) == pytest.approx(-1.0)

    def test_invariant_under_category_relabeling(self):
        relabeled = [[row[2], row[0], row[1]] for row in HAND_FIXTURE]
        assert fleiss_kappa(relabeled, 3) == pytest.approx(
            fleiss_kappa(HAND_FIXTURE, 3), abs=1e-12)

    def test_inconsistent_rater_count_rejected(self):
        with pytest.raises(AnalysisError, match="rated by"):
            fleiss_kappa([[3, 0, 0], [2, 0, 0]], 3)


class TestLevelRatingMatrix:
    def test_builds_matrix_from_multirater_comments(self):
        code_p = SACode("perception", "costs", "increase")
        code_c = SACode("comprehension", "general", "positive")
        comments = [
            CodedComment("p1", 24, "costs rising", (code_p,), rater="r1"),
            CodedComment("p1", 24, "costs rising", (code_p,), rater="r2"),
            CodedComment("p1", 24, "costs rising", (code_c,), rater="r3"),
            CodedComment("p1", 28, "", (), rater="r1"),
            CodedComment("p1", 28, "", (), rater="r2"),
            CodedComment("p1", 28, "", (), rater="r3"),
        ]
        matrix, n = level_rating_matrix(comments)
        assert n == 3
        assert matrix == [[2, 1, 0, 0], [0, 0, 0, 3]]

    def test_items_missing_a_rater_are_dropped(self):
        code = SACode("perception", "costs", "increase")
        comments = [
            CodedComment("p1", 24, "x", (code,), rater="r1"),
            CodedComment("p1", 24, "x", (code,), rater="r2"),
            CodedComment("p2", 24, "y", (code,), rater="r1"),
        ]
        matrix, n = level_rating_matrix(comments)
        assert len(matrix) == 1
