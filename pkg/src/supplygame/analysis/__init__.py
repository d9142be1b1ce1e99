from supplygame.analysis.codebook import (
    SA_LEVELS,
    CODEBOOK,
    SACode,
    CodedComment,
    load_comments_csv,
    load_players_csv,
    write_comments_csv,
    majority_vote,
)
from supplygame.analysis.contingency import (
    ContingencyTable,
    ChiSquareResult,
    CellTest,
    FisherResult,
    build_contingency,
    chi_square_independence,
    cramers_v,
    posthoc_bonferroni,
    fisher_exact,
)
from supplygame.analysis.agreement import fleiss_kappa, level_rating_matrix
from supplygame.analysis.series import count_ratio_series, word_stats, WordStats
from supplygame.analysis.profiling import (
    DeviationSequence,
    deviation_sequences,
    filter_outliers,
    profile_players,
    PROFILES,
)

__all__ = [
    "SA_LEVELS",
    "CODEBOOK",
    "SACode",
    "CodedComment",
    "load_comments_csv",
    "load_players_csv",
    "write_comments_csv",
    "majority_vote",
    "ContingencyTable",
    "ChiSquareResult",
    "CellTest",
    "FisherResult",
    "build_contingency",
    "chi_square_independence",
    "cramers_v",
    "posthoc_bonferroni",
    "fisher_exact",
    "fleiss_kappa",
    "level_rating_matrix",
    "count_ratio_series",
    "word_stats",
    "WordStats",
    "DeviationSequence",
    "deviation_sequences",
    "filter_outliers",
    "profile_players",
    "PROFILES",
]
