"""Contingency tables and the association tests run on them.

Covers the full published pipeline: observed/expected counts, Pearson's
chi-squared test of independence with a low-expected-count flag,
Cramer's V, a residual-based post-hoc with per-cell Bonferroni
correction, and Fisher's exact test generalised to r x c tables by
margin-preserving enumeration (Monte Carlo above the enumeration
budget).

Post-hoc convention: each cell's adjusted standardized residual
``(O - E) / sqrt(E (1 - rowTot/N) (1 - colTot/N))`` is significant at
level ``alpha`` when its Gaussian tail probability falls below
``alpha / (r * c)``.  This is the convention that reproduces the
published significance patterns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from supplygame.errors import AnalysisError
from supplygame.analysis.codebook import SA_LEVELS, CodedComment
from supplygame.analysis.special import chi_square_sf, normal_tail

LOW_EXPECTED_THRESHOLD = 5.0
DEFAULT_ENUMERATION_BUDGET = 5_000_000


@dataclass
class ContingencyTable:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.counts) != len(self.row_labels):
            raise AnalysisError("row label / count shape mismatch")
        if any(len(r) != len(self.col_labels) for r in self.counts):
            raise AnalysisError("column label / count shape mismatch")
        if any(c < 0 for row in self.counts for c in row):
            raise AnalysisError("counts must be non-negative")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    @property
    def n(self) -> int:
        return sum(sum(r) for r in self.counts)

    def row_totals(self) -> list[int]:
        return [sum(r) for r in self.counts]

    def col_totals(self) -> list[int]:
        return [sum(r[j] for r in self.counts) for j in range(len(self.col_labels))]

    def expected(self) -> list[list[float]]:
        n = self.n
        if n == 0:
            raise AnalysisError("empty table")
        rows, cols = self.row_totals(), self.col_totals()
        return [[rt * ct / n for ct in cols] for rt in rows]

    def cell(self, row: str, col: str) -> int:
        return self.counts[self.row_labels.index(row)][self.col_labels.index(col)]


def build_contingency(comments: list[CodedComment], group_of: dict[str, str],
                      row_order: list[str] | None = None,
                      col_labels: tuple[str, ...] = SA_LEVELS) -> ContingencyTable:
    """Count code tuples per (group, SA level) over resolved comments.

    ``group_of`` maps player id to a row label (condition attribute,
    behavioral profile, ...).  Every comment's player must be mappable.
    """
    if not comments:
        raise AnalysisError("no comments to tabulate")
    missing = {c.player for c in comments if c.player not in group_of}
    if missing:
        raise AnalysisError(f"players without a group: {sorted(missing)[:5]}")
    groups = row_order or sorted({group_of[c.player] for c in comments})
    index = {g: i for i, g in enumerate(groups)}
    col_index = {l: j for j, l in enumerate(col_labels)}
    counts = [[0] * len(col_labels) for _ in groups]
    for c in comments:
        g = group_of[c.player]
        if g not in index:
            raise AnalysisError(f"group {g!r} not in row order")
        for code in c.codes:
            counts[index[g]][col_index[code.level]] += 1
    return ContingencyTable(tuple(groups), tuple(col_labels),
                            tuple(tuple(r) for r in counts))


@dataclass
class ChiSquareResult:
    statistic: float
    df: int
    p_value: float
    low_expected: bool  # some expected count < 5 violates the test assumption

    def as_dict(self) -> dict:
        return self.__dict__.copy()


def chi_square_independence(table: ContingencyTable) -> ChiSquareResult:
    r, c = table.shape
    if r < 2 or c < 2:
        raise AnalysisError("chi-squared test needs at least a 2x2 table")
    if table.n == 0:
        raise AnalysisError("empty table")
    if any(t == 0 for t in table.row_totals()) or any(t == 0 for t in table.col_totals()):
        raise AnalysisError("zero marginal row or column")
    expected = table.expected()
    stat = sum(
        (table.counts[i][j] - expected[i][j]) ** 2 / expected[i][j]
        for i in range(r) for j in range(c)
    )
    df = (r - 1) * (c - 1)
    return ChiSquareResult(
        statistic=stat,
        df=df,
        p_value=chi_square_sf(stat, df),
        low_expected=any(e < LOW_EXPECTED_THRESHOLD for row in expected for e in row),
    )


def cramers_v(statistic: float, n: int, r: int, c: int) -> float:
    if n <= 0 or min(r, c) < 2:
        raise AnalysisError("Cramer's V needs n > 0 and at least two rows and columns")
    return math.sqrt(statistic / (n * (min(r, c) - 1)))


@dataclass
class CellTest:
    row: str
    col: str
    observed: int
    expected: float
    residual: float  # adjusted standardized residual
    tail_p: float  # one-sided Gaussian tail of |residual|
    significant_05: bool
    significant_01: bool


def posthoc_bonferroni(table: ContingencyTable,
                       alphas: tuple[float, float] = (0.05, 0.01)) -> list[CellTest]:
    """Residual-based post-hoc over every cell with Bonferroni divisor r*c."""
    r, c = table.shape
    n = table.n
    expected = table.expected()
    row_tot, col_tot = table.row_totals(), table.col_totals()
    cells = []
    divisor = r * c
    for i, row_label in enumerate(table.row_labels):
        for j, col_label in enumerate(table.col_labels):
            e = expected[i][j]
            denom = math.sqrt(e * (1 - row_tot[i] / n) * (1 - col_tot[j] / n))
            if denom == 0:
                raise AnalysisError(f"degenerate cell ({row_label}, {col_label})")
            z = (table.counts[i][j] - e) / denom
            tail = normal_tail(abs(z))
            cells.append(CellTest(
                row=row_label, col=col_label,
                observed=table.counts[i][j], expected=e,
                residual=z, tail_p=tail,
                significant_05=tail < alphas[0] / divisor,
                significant_01=tail < alphas[1] / divisor,
            ))
    return cells


@dataclass
class FisherResult:
    p_value: float
    method: str  # "enumeration" | "monte-carlo"
    tables: int  # tables enumerated, or draws taken


def _log_table_prob(counts: list[list[int]], log_margin_const: float) -> float:
    return log_margin_const - sum(math.lgamma(c + 1) for row in counts for c in row)


def fisher_exact(table: ContingencyTable,
                 budget: int = DEFAULT_ENUMERATION_BUDGET,
                 monte_carlo: bool = False,
                 draws: int = 1_000_000,
                 seed: int = 0) -> FisherResult:
    """Fisher's exact test for an r x c table.

    Enumerates every table with the observed margins and sums the
    probability of those no more probable than the observed one.  If the
    enumeration would exceed ``budget`` tables, falls back to Monte
    Carlo sampling from the margin-fixed null (only when enabled).
    """
    r, c = table.shape
    if r < 2 or c < 2:
        raise AnalysisError("Fisher's exact test needs at least a 2x2 table")
    row_tot, col_tot = table.row_totals(), table.col_totals()
    n = table.n
    if n == 0:
        raise AnalysisError("empty table")
    log_margin_const = (
        sum(math.lgamma(t + 1) for t in row_tot)
        + sum(math.lgamma(t + 1) for t in col_tot)
        - math.lgamma(n + 1)
    )
    observed_logp = _log_table_prob([list(r_) for r_ in table.counts], log_margin_const)
    cutoff = observed_logp + 1e-9

    total_p = 0.0
    seen = 0
    aborted = False

    def enumerate_tables(row: int, remaining_cols: list[int], acc: list[list[int]]):
        nonlocal total_p, seen, aborted
        if aborted:
            return
        if row == r - 1:
            # last row forced by the column margins
            last = list(remaining_cols)
            if any(v < 0 for v in last):
                return
            seen += 1
            if seen > budget:
                aborted = True
                return
            logp = _log_table_prob(acc + [last], log_margin_const)
            if logp <= cutoff:
                total_p += math.exp(logp)
            return
        target = row_tot[row]

        def fill(col: int, left: int, current: list[int]):
            nonlocal aborted
            if aborted:
                return
            if col == c - 1:
                if left > remaining_cols[col]:
                    return
                current.append(left)
                next_cols = [remaining_cols[j] - current[j] for j in range(c)]
                enumerate_tables(row + 1, next_cols, acc + [list(current)])
                current.pop()
                return
            upper = min(left, remaining_cols[col])
            for v in range(upper + 1):
                current.append(v)
                fill(col + 1, left - v, current)
                current.pop()

        fill(0, target, [])

    enumerate_tables(0, list(col_tot), [])
    if not aborted:
        return FisherResult(p_value=min(1.0, total_p), method="enumeration", tables=seen)
    if not monte_carlo:
        raise AnalysisError(
            f"enumeration budget of {budget} tables exceeded; enable monte_carlo")

    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(draws):
        cols_left = np.array(col_tot)
        sample: list[list[int]] = []
        for i in range(r - 1):
            row_draw = rng.multivariate_hypergeometric(cols_left, row_tot[i])
            sample.append([int(v) for v in row_draw])
            cols_left = cols_left - row_draw
        sample.append([int(v) for v in cols_left])
        if _log_table_prob(sample, log_margin_const) <= cutoff:
            hits += 1
    return FisherResult(p_value=(hits + 1) / (draws + 1), method="monte-carlo", tables=draws)
