#!/usr/bin/env python3
"""Regenerate the bundled coded-comment sample datasets.

The two shipped datasets are synthetic coded-comment tables whose
marginal counts reproduce the two studies' published contingency tables,
so the statistics pipeline can be exercised end to end without human
data.  Group sizes match the published condition/profile cell sizes.

Run from the repository root:

    python3 tools/generate_sample_data.py
"""

from __future__ import annotations

import csv
import random
from pathlib import Path

import sys
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from supplygame.analysis.codebook import CODEBOOK, CodedComment, SACode, write_comments_csv

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "supplygame" / "data"
MEETING_WEEKS = (24, 28, 32, 36, 40, 44, 48, 52)
SA = ("perception", "comprehension", "projection")

# ---- study 1: players per (disruption, info) condition cell ------------
S1_PLAYERS = {
    ("MN1", "none"): 17, ("MN2", "none"): 19,
    ("MN1", "partial"): 20, ("MN2", "partial"): 21,
    ("MN1", "complete"): 18, ("MN2", "complete"): 20,
}
# codes per condition cell and SA level; the marginals over disruption
# rows and info rows equal the published study-1 table
S1_CODES = {
    ("MN1", "none"): (14, 115, 9),
    ("MN1", "partial"): (33, 121, 17),
    ("MN1", "complete"): (22, 122, 12),
    ("MN2", "none"): (18, 122, 18),
    ("MN2", "partial"): (47, 125, 34),
    ("MN2", "complete"): (38, 122, 22),
}

# ---- study 2: players and codes per (profile, info) cell ---------------
S2_PLAYERS = {
    ("hoarder", "none"): 31, ("hoarder", "partial"): 25,
    ("reactor", "none"): 21, ("reactor", "partial"): 27,
    ("follower", "none"): 9, ("follower", "partial"): 8,
}
S2_CODES = {
    ("hoarder", "none"): (31, 224, 20),
    ("hoarder", "partial"): (57, 163, 36),
    ("reactor", "none"): (39, 148, 28),
    ("reactor", "partial"): (21, 185, 14),
    ("follower", "none"): (1, 49, 2),
    ("follower", "partial"): (3, 46, 2),
}

TEXT_POOL = {
    "perception": [
        "backlog keeps climbing and so do the costs",
        "inventory cost goes high again",
        "profit fell this month",
        "demand looks flat, orders steady",
        "stock levels dropped a lot this week",
        "we are over-ordering compared to what sells",
    ],
    "comprehension": [
        "doing fine", "pretty bad", "okay overall", "good",
        "not great, hard to tell what is happening",
        "we are meeting demand with stock to spare",
        "terrible, the supply feels unreliable",
    ],
    "projection": [
        "I expect demand to rise so I will order more",
        "planning to stock up before things get worse",
        "should improve once the supplier reopens",
        "I anticipate problems with the next shipments",
        "will allocate proportionally going forward",
    ],
}


def pick_code(rng: random.Random, level: str) -> SACode:
    book = CODEBOOK[level]
    if level == "comprehension":
        # short evaluative remarks dominate this level
        topic = "general" if rng.random() < 0.7 else rng.choice(book["topics"])
    else:
        topic = rng.choice(book["topics"])
    return SACode(level, topic, rng.choice(book["descriptions"]))


def build_cell(rng, players, code_counts, unanswered_share):
    """Assign a cell's code budget across its players' meeting slots."""
    slots = [(p, w) for p in players for w in MEETING_WEEKS]
    n_unanswered = int(len(slots) * unanswered_share)
    unanswered = set(rng.sample(range(len(slots)), n_unanswered))
    open_slots = [i for i in range(len(slots)) if i not in unanswered]
    codes = []
    for level, count in zip(SA, code_counts):
        codes.extend(pick_code(rng, level) for _ in range(count))
    rng.shuffle(codes)
    if len(open_slots) > len(codes):
        # not enough codes to answer every slot (quiet groups): the
        # leftover slots go unanswered too
        extra = rng.sample(open_slots, len(open_slots) - len(codes))
        unanswered.update(extra)
        open_slots = [i for i in open_slots if i not in set(extra)]
    by_slot: dict[int, list[SACode]] = {i: [] for i in open_slots}
    for i, code in enumerate(codes):
        by_slot[open_slots[i % len(open_slots)]].append(code)
    comments = []
    for i, (player, week) in enumerate(slots):
        if i in unanswered:
            comments.append(CodedComment(player, week, "", ()))
            continue
        cell_codes = tuple(by_slot[i])
        text = rng.choice(TEXT_POOL[cell_codes[0].level]) if cell_codes else ""
        comments.append(CodedComment(player, week, text, cell_codes))
    return comments


def write_players(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["player", "study", "disruption",
                                                "info", "profile"])
        writer.writeheader()
        writer.writerows(rows)


def generate_study1():
    rng = random.Random(101)
    comments, players = [], []
    counter = 0
    for (disruption, info), n in S1_PLAYERS.items():
        ids = [f"PL1-{counter + i + 1:03d}" for i in range(n)]
        counter += n
        for pid in ids:
            players.append({"player": pid, "study": "study1",
                            "disruption": disruption, "info": info, "profile": ""})
        comments.extend(build_cell(rng, ids, S1_CODES[(disruption, info)], 0.055))
    write_comments_csv(DATA_DIR / "study1_codes.csv", comments)
    write_players(DATA_DIR / "study1_players.csv", players)
    return comments


def generate_study2():
    rng = random.Random(202)
    comments, players = [], []
    counter = 0
    for (profile, info), n in S2_PLAYERS.items():
        ids = [f"PL2-{counter + i + 1:03d}" for i in range(n)]
        counter += n
        for pid in ids:
            players.append({"player": pid, "study": "study2",
                            "disruption": "MN1", "info": info, "profile": profile})
        comments.extend(build_cell(rng, ids, S2_CODES[(profile, info)], 0.038))
    write_comments_csv(DATA_DIR / "study2_codes.csv", comments)
    write_players(DATA_DIR / "study2_players.csv", players)
    return comments


def generate_irr_sample():
    """A small three-rater coding sample for the agreement pipeline."""
    rng = random.Random(303)
    comments = []
    raters = ("r1", "r2", "r3")
    for i in range(24):
        player = f"IRR-{i + 1:02d}"
        week = MEETING_WEEKS[i % 8]
        level = SA[i % 3]
        text = rng.choice(TEXT_POOL[level])
        base = pick_code(rng, level)
        for j, rater in enumerate(raters):
            # one rater in three occasionally disagrees
            if j == 2 and i % 4 == 0:
                other = SA[(SA.index(level) + 1) % 3]
                code = pick_code(rng, other)
            else:
                code = base
            comments.append(CodedComment(player, week, text, (code,), rater=rater))
    write_comments_csv(DATA_DIR / "irr_sample_codes.csv", comments)


def main():
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    s1 = generate_study1()
    s2 = generate_study2()
    generate_irr_sample()
    print(f"study1: {len(s1)} comments, {sum(len(c.codes) for c in s1)} codes")
    print(f"study2: {len(s2)} comments, {sum(len(c.codes) for c in s2)} codes")


if __name__ == "__main__":
    main()
