"""Assemble the binary classifier corpus from references and generated negatives.

Positives are the reference summaries of the infiller-training half;
negatives are generated summaries over the other half. The two halves
never cross: a pair id contributes either positives or negatives, never
both, which is the data-hygiene invariant the tests audit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import CONSISTENT, INCONSISTENT, CorpusSplit
from .errors import ConfigError, DataError
from .infill import GeneratedSummary
from .seeding import stable_hash

ORIGINS = ("reference", "mfma", "msm", "mf")


@dataclass(frozen=True)
class LabeledExample:
    pair_id: str
    article: str
    summary: str
    label: str
    origin: str

    def __post_init__(self):
        if self.origin not in ORIGINS:
            raise ValueError(f"bad origin: {self.origin!r}")
        if (self.label == CONSISTENT) != (self.origin == "reference"):
            raise ValueError(
                f"label {self.label!r} is inconsistent with origin {self.origin!r}")


@dataclass(frozen=True)
class FilterPolicy:
    """Drops degenerate negatives before assembly.

    A negative whose normalized edit distance to its reference summary
    falls below min_edit_distinctness counts as a near-copy and is
    dropped. The default threshold 0 keeps everything.
    """

    min_edit_distinctness: float = 0.0
    drop_empty: bool = True

    def __post_init__(self):
        if not 0.0 <= self.min_edit_distinctness <= 1.0:
            raise ConfigError(
                f"min_edit_distinctness must be in [0, 1], got {self.min_edit_distinctness}")


def normalized_edit_distance(a: str, b: str) -> float:
    """Character-level Levenshtein distance divided by the longer length."""
    if a == b:
        return 0.0
    if not a or not b:
        return 1.0
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1] / max(len(a), len(b))


def assemble(split: CorpusSplit, negatives: list[GeneratedSummary],
             policy: FilterPolicy | None = None, seed: int = 0) -> list[LabeledExample]:
    """Merge positives and surviving negatives into one shuffled dataset.

    The shuffle is a deterministic hash ordering keyed by the dataset
    seed, so identical inputs yield an identical example order.
    """
    policy = policy or FilterPolicy()
    gen_by_id = {p.id: p for p in split.gen_half}
    train_ids = split.train_ids

    keyed = []
    for p in split.train_half:
        ex = LabeledExample(pair_id=p.id, article=p.article, summary=p.summary,
                            label=CONSISTENT, origin="reference")
        keyed.append(((stable_hash(seed, p.id, "reference", -1),
                       p.id, "reference", -1), ex))
    for g in negatives:
        if g.pair_id in train_ids:
            raise DataError(f"negative references infiller-training pair {g.pair_id!r}")
        pair = gen_by_id.get(g.pair_id)
        if pair is None:
            raise DataError(f"negative references unknown pair {g.pair_id!r}")
        if policy.drop_empty and not g.text.strip():
            continue
        if (policy.min_edit_distinctness > 0.0
                and normalized_edit_distance(g.text, pair.summary)
                < policy.min_edit_distinctness):
            continue
        ex = LabeledExample(pair_id=g.pair_id, article=pair.article, summary=g.text,
                            label=INCONSISTENT, origin=g.method)
        keyed.append(((stable_hash(seed, g.pair_id, g.method, g.sample_index),
                       g.pair_id, g.method, g.sample_index), ex))
    keyed.sort(key=lambda kv: kv[0])
    return [ex for _, ex in keyed]


def dataset_stats(examples: list[LabeledExample]) -> dict:
    """Counts per label and origin, class ratio, summary-length percentiles."""
    if not examples:
        raise DataError("cannot compute stats for an empty dataset")
    by_label: dict[str, int] = {CONSISTENT: 0, INCONSISTENT: 0}
    by_origin: dict[str, int] = {}
    lengths = []
    for ex in examples:
        by_label[ex.label] += 1
        by_origin[ex.origin] = by_origin.get(ex.origin, 0) + 1
        lengths.append(len(ex.summary.split()))
    n = len(examples)
    pct = {f"p{q}": float(np.percentile(lengths, q)) for q in (25, 50, 75, 90)}
    return {
        "total": n,
        "by_label": by_label,
        "by_origin": by_origin,
        "class_ratio": by_label[CONSISTENT] / n,
        "summary_length_tokens": pct,
    }


def dataset_fingerprint(examples: list[LabeledExample]) -> str:
    """sha256 over the canonical JSONL form; identifies a dataset in manifests."""
    h = hashlib.sha256()
    for ex in examples:
        row = json.dumps({"pair_id": ex.pair_id, "article": ex.article,
                          "summary": ex.summary, "label": ex.label,
                          "origin": ex.origin}, sort_keys=True, ensure_ascii=False)
        h.update(row.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def save_dataset(examples: list[LabeledExample], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for ex in examples:
            f.write(json.dumps({"pair_id": ex.pair_id, "article": ex.article,
                                "summary": ex.summary, "label": ex.label,
                                "origin": ex.origin}, ensure_ascii=False) + "\n")


def load_dataset(path: str | Path) -> list[LabeledExample]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"dataset file does not exist: {path}")
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
                out.append(LabeledExample(pair_id=str(raw["pair_id"]),
                                          article=raw["article"], summary=raw["summary"],
                                          label=raw["label"], origin=raw["origin"]))
            except (json.JSONDecodeError, KeyError, ValueError) as e:
                raise DataError(f"malformed record at line {lineno}: {e}") from e
    if not out:
        raise DataError(f"empty dataset file: {path}")
    return out
