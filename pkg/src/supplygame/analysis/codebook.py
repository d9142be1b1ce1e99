"""Situation-awareness codebook and coded-comment data model.

Free-text responses to the recurring meeting prompt are coded as tuples
``<level, topic, description>``: the awareness level they reflect
(perception of system elements, comprehension of the state, projection
of future states), the supply-chain topic addressed, and how it is
described.  Only combinations present in the codebook are valid.

The on-disk form is a delimited table with one row per code tuple
(player, week, text, rater, level, topic, description); a comment with
no codes appears as a single row with the tuple columns empty.
"""

from __future__ import annotations

import csv
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path

from supplygame.errors import AnalysisError

SA_LEVELS = ("perception", "comprehension", "projection")

CODEBOOK: dict[str, dict[str, tuple[str, ...]]] = {
    "perception": {
        "topics": (
            "inventory cost", "backlog cost", "costs", "profit",
            "inventory", "demand", "backlog", "order",
        ),
        "descriptions": (
            "increase", "decrease", "consistent", "zero", "over-order", "under-order",
        ),
    },
    "comprehension": {
        "topics": ("general", "inventory", "demand", "backlog", "supply line", "order"),
        "descriptions": ("positive", "negative", "neutral", "uncertain"),
    },
    "projection": {
        "topics": ("general", "profit", "inventory", "demand", "backlog", "order", "allocation"),
        "descriptions": (
            "improve", "anticipate problem/uncertainty", "increase", "decrease",
            "constant", "uncertain", "proportionally", "HC with higher delivery rate", "HC2",
        ),
    },
}

DEFAULT_MEETING_WEEKS = (24, 28, 32, 36, 40, 44, 48, 52)


@dataclass(frozen=True)
class SACode:
    level: str
    topic: str
    description: str

    def __post_init__(self):
        if self.level not in CODEBOOK:
            raise AnalysisError(f"unknown SA level {self.level!r}")
        book = CODEBOOK[self.level]
        if self.topic not in book["topics"]:
            raise AnalysisError(f"topic {self.topic!r} not in codebook for {self.level}")
        if self.description not in book["descriptions"]:
            raise AnalysisError(
                f"description {self.description!r} not in codebook for {self.level}")


@dataclass
class CodedComment:
    player: str
    week: int
    text: str
    codes: tuple[SACode, ...] = ()
    rater: str = "consensus"

    def __post_init__(self):
        if self.week not in DEFAULT_MEETING_WEEKS:
            raise AnalysisError(
                f"comment week {self.week} is not a meeting week for player {self.player}")

    @property
    def answered(self) -> bool:
        return bool(self.text.strip())


@dataclass(frozen=True)
class PlayerInfo:
    player: str
    study: str
    disruption: str
    info: str
    profile: str = ""


COMMENT_FIELDS = ("player", "week", "text", "rater", "level", "topic", "description")


def load_comments_csv(path: str | Path) -> list[CodedComment]:
    """Read the delimited export, grouping code rows back into comments."""
    grouped: dict[tuple[str, int, str], dict] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(COMMENT_FIELDS) - set(reader.fieldnames or ())
        if missing:
            raise AnalysisError(f"comment table missing columns: {sorted(missing)}")
        for line, row in enumerate(reader, start=2):
            try:
                week = int(row["week"])
            except ValueError as exc:
                raise AnalysisError(f"line {line}: bad week {row['week']!r}") from exc
            key = (row["player"], week, row["rater"])
            entry = grouped.setdefault(key, {"text": row["text"], "codes": []})
            if entry["text"] != row["text"]:
                raise AnalysisError(f"line {line}: conflicting text for {key}")
            if row["level"]:
                entry["codes"].append(SACode(row["level"], row["topic"], row["description"]))
    comments = [
        CodedComment(player=p, week=w, text=e["text"], codes=tuple(e["codes"]), rater=r)
        for (p, w, r), e in grouped.items()
    ]
    comments.sort(key=lambda c: (c.player, c.week, c.rater))
    return comments


def write_comments_csv(path: str | Path, comments: list[CodedComment]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(COMMENT_FIELDS)
        for c in comments:
            if c.codes:
                for code in c.codes:
                    writer.writerow(
                        [c.player, c.week, c.text, c.rater,
                         code.level, code.topic, code.description])
            else:
                writer.writerow([c.player, c.week, c.text, c.rater, "", "", ""])


def load_players_csv(path: str | Path) -> dict[str, PlayerInfo]:
    players: dict[str, PlayerInfo] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            players[row["player"]] = PlayerInfo(
                player=row["player"],
                study=row.get("study", ""),
                disruption=row.get("disruption", ""),
                info=row.get("info", ""),
                profile=row.get("profile", ""),
            )
    return players


def majority_vote(comments: list[CodedComment], min_agree: int = 2) -> list[CodedComment]:
    """Resolve multi-rater codings: keep tuples at least ``min_agree`` raters used.

    Comments sharing (player, week) across raters collapse into one
    consensus comment.  With a single rater the codes pass through.
    """
    by_item: dict[tuple[str, int], list[CodedComment]] = defaultdict(list)
    for c in comments:
        by_item[(c.player, c.week)].append(c)
    resolved = []
    for (player, week), group in sorted(by_item.items()):
        if len(group) == 1:
            only = group[0]
            resolved.append(CodedComment(player, week, only.text, only.codes, "consensus"))
            continue
        counts: Counter[SACode] = Counter()
        for c in group:
            for code in set(c.codes):
                counts[code] += 1
        kept = tuple(sorted(
            (code for code, n in counts.items() if n >= min_agree),
            key=lambda s: (s.level, s.topic, s.description),
        ))
        resolved.append(CodedComment(player, week, group[0].text, kept, "consensus"))
    return resolved
