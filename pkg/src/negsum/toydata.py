"""Bundled synthetic corpus: small, entity-dense, and fully deterministic.

Every article is a short match report built from fixed name pools, so
span extraction finds plenty of entities and determiner-led chunks at
every unit. Reference summaries reuse article sentences nearly verbatim,
which is what lets the lexical-overlap mock classifier separate them
from mask-scrambled negatives. All choices flow from stable hashes of
(seed, index, field); there is no ambient randomness.
"""

from __future__ import annotations

from .corpus import BenchmarkRecord, DocumentPair
from .seeding import stable_hash

PEOPLE = [
    "Maria Santos", "David Okafor", "Elena Petrova", "James Whitfield",
    "Aisha Rahman", "Carlos Mendez", "Ingrid Larsen", "Tomas Novak",
]
TEAMS = [
    "Riverton United", "Halcyon City", "Northgate Rovers",
    "Westbrook Albion", "Eastdale Athletic", "Southport Wanderers",
]
CITIES = ["Riverton", "Halcyon", "Northgate", "Westbrook", "Eastdale", "Southport"]
STADIUMS = [
    "the Meridian Ground", "the Copper Bowl", "the Lakeside Stadium",
    "the Harrington Arena", "the Ironbridge Park", "the Summit Field",
]
WEEKDAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"]
PLACES = ["second", "third", "fourth", "fifth", "sixth"]

# replacement vocabulary for corrupted benchmark summaries; none of these
# words appear in any generated article
DISTRACTORS = [
    "quartz", "velvet", "orchid", "lantern", "pebble", "marzipan",
    "turbine", "falcon", "harbor", "cinnamon", "satchel", "juniper",
]


def _pick(pool: list[str], *key) -> str:
    return pool[stable_hash(*key) % len(pool)]


def _pick_distinct(pool: list[str], count: int, *key) -> list[str]:
    first = stable_hash(*key, 0) % len(pool)
    picked = [first]
    for k in range(1, count):
        step = 1 + stable_hash(*key, k) % (len(pool) - 1)
        nxt = (picked[-1] + step) % len(pool)
        while nxt in picked:
            nxt = (nxt + 1) % len(pool)
        picked.append(nxt)
    return [pool[i] for i in picked]


def _match_report(seed: int, tag: str, i: int) -> tuple[str, str]:
    """One (article, summary) pair; the summary reuses article phrasing."""
    team_a, team_b, team_c = _pick_distinct(TEAMS, 3, seed, tag, i, "teams")
    person_a, person_b, person_c = _pick_distinct(PEOPLE, 3, seed, tag, i, "people")
    stadium = _pick(STADIUMS, seed, tag, i, "stadium")
    weekday = _pick(WEEKDAYS, seed, tag, i, "weekday")
    weekday2 = _pick(WEEKDAYS, seed, tag, i, "weekday2")
    place = _pick(PLACES, seed, tag, i, "place")
    goals_a = 2 + stable_hash(seed, tag, i, "goals_a") % 3
    goals_b = stable_hash(seed, tag, i, "goals_b") % goals_a
    score = f"{goals_a}-{goals_b}"
    minutes = 9 + stable_hash(seed, tag, i, "minutes") % 81
    points = 20 + stable_hash(seed, tag, i, "points") % 40
    games = 15 + stable_hash(seed, tag, i, "games") % 15
    city = CITIES[TEAMS.index(team_c)]

    article = (
        f"{team_a} beat {team_b} {score} at {stadium} on {weekday}. "
        f"{person_a} scored the opening goal after {minutes} minutes "
        f"and {person_c} added a second before the interval. "
        f"{person_b}, the {team_b} manager, called the defeat a setback "
        f"for the club and promised a response. "
        f"The result leaves {team_a} in {place} place with {points} points "
        f"from {games} games. "
        f"{team_b} travel to {city} to face {team_c} next {weekday2}."
    )
    summary = (
        f"{team_a} beat {team_b} {score} at {stadium}. "
        f"{person_a} scored the opening goal after {minutes} minutes."
    )
    return article, summary


def toy_pairs(n: int = 50, seed: int = 0) -> list[DocumentPair]:
    """Generate n synthetic article-summary pairs with ids toy-000, toy-001, ..."""
    out = []
    for i in range(n):
        article, summary = _match_report(seed, "pair", i)
        out.append(DocumentPair(id=f"toy-{i:03d}", article=article, summary=summary))
    return out


def _corrupt(summary: str, severity: int, seed: int, rec_id: str) -> str:
    """Replace severity+2 hash-chosen tokens with out-of-article distractors."""
    tokens = summary.split()
    k = min(len(tokens), severity + 2)
    ranked = sorted(range(len(tokens)),
                    key=lambda pos: (stable_hash(seed, rec_id, "corrupt", pos), pos))
    for pos in ranked[:k]:
        tokens[pos] = _pick(DISTRACTORS, seed, rec_id, "fill", pos)
    return " ".join(tokens)


def toy_benchmark(n: int = 20, seed: int = 1) -> list[BenchmarkRecord]:
    """Generate a Likert-judged benchmark: half clean, half graded corruptions.

    The first half are verbatim-faithful summaries judged [5, 5, 5]; the
    second half corrupt progressively more tokens and their judgments
    degrade with severity, so the min-rule binarization splits the set
    exactly in half and the mean scores have real variance.
    """
    records = []
    for i in range(n):
        rec_id = f"bench-{i:02d}"
        article, summary = _match_report(seed, "bench", i)
        if i < n - n // 2:
            judgments = [5, 5, 5]
        else:
            severity = i - (n - n // 2) + 1
            summary = _corrupt(summary, severity, seed, rec_id)
            judgments = [max(1, 5 - (severity + 1) // 2),
                         max(1, 5 - (severity + 2) // 3),
                         max(1, 4 - (severity - 1) // 3)]
        records.append(BenchmarkRecord(
            id=rec_id, article=article, summary=summary, judgments=judgments,
            binary_label=None, numeric_score=sum(judgments) / len(judgments)))
    return records
