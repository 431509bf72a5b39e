"""Article-summary corpora, benchmark ingestion, and the deterministic half-split.

The canonical interchange format everywhere is UTF-8 JSON lines:
pairs are ``{id, article, summary}``; benchmark records are
``{id, article, summary, judgments: [...], label?, score?}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, DataError
from .seeding import stable_hash

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"

CORPUS_FORMATS = ("jsonl-pairs", "cnndm-stories")

# benchmark schema id -> judgment style
#   binary: records carry a per-record label, usable as-is
#   likert: per-annotator integer scores 1..5
#   flags:  per-annotator consistent/inconsistent flags
BENCHMARK_SCHEMAS = {
    "factcc-test": "binary",
    "xsumhall": "binary",
    "summeval": "likert",
    "qags-cnndm": "flags",
    "qags-xsum": "flags",
    "frank-cnndm": "flags",
    "frank-xsum": "flags",
}

_WS = re.compile(r"\s+")


def normalize_whitespace(text: str) -> str:
    """Collapse whitespace runs to single spaces and strip the ends."""
    return _WS.sub(" ", text).strip()


@dataclass(frozen=True)
class DocumentPair:
    """An article with its reference summary, assumed factually consistent."""

    id: str
    article: str
    summary: str


@dataclass(frozen=True)
class CorpusSplit:
    """Disjoint halves: one trains the infiller, the other feeds generation."""

    train_half: list[DocumentPair]
    gen_half: list[DocumentPair]
    seed: int

    @property
    def train_ids(self) -> frozenset[str]:
        return frozenset(p.id for p in self.train_half)

    @property
    def gen_ids(self) -> frozenset[str]:
        return frozenset(p.id for p in self.gen_half)


@dataclass
class BenchmarkRecord:
    """One benchmark item: raw human judgments plus derived labels.

    ``binary_label`` stays None until a binarization rule is applied,
    except for benchmarks that are already binary at the source.
    ``numeric_score`` is the mean human score used for correlation.
    """

    id: str
    article: str
    summary: str
    judgments: list = field(default_factory=list)
    binary_label: str | None = None
    numeric_score: float | None = None


def load_pairs(path: str | Path, format: str = "jsonl-pairs") -> list[DocumentPair]:
    """Load article-summary pairs from ``path``.

    Formats: ``jsonl-pairs`` (one ``{id, article, summary}`` object per
    line; missing ids are synthesized as ``<filename>:<line-number>``) and
    ``cnndm-stories`` (a ``.story`` file or a directory of them; the
    summary is the @highlight blocks joined with " . "). Input order is
    preserved; text is whitespace-normalized at load.
    """
    if format not in CORPUS_FORMATS:
        raise ConfigError(f"unknown corpus format: {format!r} (expected one of {CORPUS_FORMATS})")
    path = Path(path)
    if not path.exists():
        raise DataError(f"corpus path does not exist: {path}")

    if format == "cnndm-stories":
        pairs = _load_stories(path)
    else:
        pairs = _load_jsonl_pairs(path)

    if not pairs:
        raise DataError(f"empty corpus: {path}")
    seen: set[str] = set()
    for p in pairs:
        if p.id in seen:
            raise DataError(f"duplicate pair id: {p.id!r}")
        seen.add(p.id)
    return pairs


def _load_jsonl_pairs(path: Path) -> list[DocumentPair]:
    pairs = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as e:
                raise DataError(f"malformed record at line {lineno}: {e}") from e
            if not isinstance(raw, dict):
                raise DataError(f"malformed record at line {lineno}: not an object")
            pair_id = str(raw["id"]) if "id" in raw else f"{path.name}:{lineno}"
            article = normalize_whitespace(str(raw.get("article", "")))
            summary = normalize_whitespace(str(raw.get("summary", "")))
            if not article:
                raise DataError(f"empty article at line {lineno}")
            if not summary:
                raise DataError(f"empty summary at line {lineno}")
            pairs.append(DocumentPair(id=pair_id, article=article, summary=summary))
    return pairs


def _load_stories(path: Path) -> list[DocumentPair]:
    files = sorted(path.glob("*.story")) if path.is_dir() else [path]
    if not files:
        raise DataError(f"no .story files under {path}")
    pairs = []
    for fp in files:
        body, highlights = [], []
        bucket = body
        for segment in fp.read_text(encoding="utf-8").split("@highlight"):
            bucket.append(segment)
            bucket = highlights
        article = normalize_whitespace(body[0])
        summary = normalize_whitespace(" . ".join(h.strip() for h in highlights if h.strip()))
        if not article:
            raise DataError(f"empty article in {fp.name}")
        if not summary:
            raise DataError(f"no @highlight blocks in {fp.name}")
        pairs.append(DocumentPair(id=fp.stem, article=article, summary=summary))
    return pairs


def save_pairs(pairs: list[DocumentPair], path: str | Path) -> None:
    """Write pairs as canonical JSONL; inverse of load_pairs on jsonl-pairs."""
    with open(path, "w", encoding="utf-8") as f:
        for p in pairs:
            f.write(json.dumps({"id": p.id, "article": p.article, "summary": p.summary},
                               ensure_ascii=False) + "\n")


def split_half(pairs: list[DocumentPair], seed: int) -> CorpusSplit:
    """Partition ``pairs`` into two near-equal halves, deterministically.

    Ids are ordered by the stable hash of (seed, id) with ties broken by
    id, and the first ceil(n/2) go to ``train_half``. The split depends
    only on the id set and the seed, never on input order, so re-exports
    of the same corpus reproduce it exactly.
    """
    if len(pairs) < 2:
        raise DataError(f"need at least 2 pairs to split, got {len(pairs)}")
    by_id = {p.id: p for p in pairs}
    if len(by_id) != len(pairs):
        raise DataError("pair ids are not unique")
    order = sorted(by_id, key=lambda pid: (stable_hash(seed, pid), pid))
    n_train = (len(order) + 1) // 2
    train = [by_id[pid] for pid in order[:n_train]]
    gen = [by_id[pid] for pid in order[n_train:]]
    return CorpusSplit(train_half=train, gen_half=gen, seed=seed)


def load_benchmark(path: str | Path, schema: str) -> list[BenchmarkRecord]:
    """Load a human-judgment benchmark in canonical JSONL form.

    ``schema`` selects how judgments parse (see BENCHMARK_SCHEMAS).
    Already-binary benchmarks get ``binary_label`` set at load; Likert and
    flag benchmarks leave it unset for a binarization rule to fill.
    ``numeric_score`` comes from the record's ``score`` field when present,
    else the mean Likert score or the fraction of consistent flags.
    """
    if schema not in BENCHMARK_SCHEMAS:
        raise ConfigError(
            f"unknown benchmark schema: {schema!r} (expected one of {sorted(BENCHMARK_SCHEMAS)})")
    path = Path(path)
    if not path.exists():
        raise DataError(f"benchmark file does not exist: {path}")
    style = BENCHMARK_SCHEMAS[schema]

    records = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as e:
                raise DataError(f"malformed record at line {lineno}: {e}") from e
            records.append(_parse_benchmark_record(raw, style, lineno, path.name))
    if not records:
        raise DataError(f"empty benchmark: {path}")
    return records


def _parse_benchmark_record(raw: dict, style: str, lineno: int, filename: str) -> BenchmarkRecord:
    rec_id = str(raw["id"]) if "id" in raw else f"{filename}:{lineno}"
    article = normalize_whitespace(str(raw.get("article", "")))
    summary = normalize_whitespace(str(raw.get("summary", "")))
    if not article or not summary:
        raise DataError(f"empty article or summary at line {lineno}")

    judgments = raw.get("judgments")
    label = raw.get("label")
    score = raw.get("score")

    if style == "binary":
        if label is None and not judgments:
            raise DataError(f"record at line {lineno} has neither label nor judgments")
        if label is None:
            label = INCONSISTENT if INCONSISTENT in judgments else CONSISTENT
        if label not in (CONSISTENT, INCONSISTENT):
            raise DataError(f"bad label {label!r} at line {lineno}")
        judgments = judgments or [label]
        numeric = float(score) if score is not None else (1.0 if label == CONSISTENT else 0.0)
        return BenchmarkRecord(rec_id, article, summary, list(judgments), label, numeric)

    if not judgments:
        raise DataError(f"record at line {lineno} is missing annotator judgments")

    if style == "likert":
        vals = []
        for j in judgments:
            if not isinstance(j, int) or isinstance(j, bool) or not 1 <= j <= 5:
                raise DataError(f"non-Likert judgment {j!r} at line {lineno}")
            vals.append(j)
        numeric = float(score) if score is not None else sum(vals) / len(vals)
        return BenchmarkRecord(rec_id, article, summary, vals, None, numeric)

    # flags
    for j in judgments:
        if j not in (CONSISTENT, INCONSISTENT):
            raise DataError(f"non-flag judgment {j!r} at line {lineno}")
    numeric = (float(score) if score is not None
               else judgments.count(CONSISTENT) / len(judgments))
    return BenchmarkRecord(rec_id, article, summary, list(judgments), None, numeric)


def save_benchmark(records: list[BenchmarkRecord], path: str | Path) -> None:
    """Write benchmark records as canonical JSONL."""
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            row: dict = {"id": r.id, "article": r.article, "summary": r.summary,
                         "judgments": r.judgments}
            if r.binary_label is not None:
                row["label"] = r.binary_label
            if r.numeric_score is not None:
                row["score"] = r.numeric_score
            f.write(json.dumps(row, ensure_ascii=False) + "\n")
