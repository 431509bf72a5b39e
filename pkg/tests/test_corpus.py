"""Corpus loading, benchmark schemas, and the deterministic half split."""

import hashlib
import json

import pytest

from negsum import (
    CONSISTENT,
    INCONSISTENT,
    BenchmarkRecord,
    DataError,
    DocumentPair,
    load_benchmark,
    load_pairs,
    save_benchmark,
    save_pairs,
    split_half,
)


def _hash(*parts):
    h = hashlib.sha256()
    for part in parts:
        b = str(part).encode("utf-8")
        h.update(str(len(b)).encode("ascii"))
        h.update(b":")
        h.update(b)
    return int.from_bytes(h.digest()[:8], "big")


def _write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")


def test_load_pairs_jsonl(tmp_path):
    path = tmp_path / "pairs.jsonl"
    _write_jsonl(path, [
        {"id": "a", "article": "One  two\nthree.", "summary": "Two three."},
        {"article": "Four five.", "summary": "Five."},
    ])
    pairs = load_pairs(path, "jsonl-pairs")
    assert [p.id for p in pairs] == ["a", "pairs.jsonl:2"]
    # whitespace collapses on load
    assert pairs[0].article == "One two three."


def test_load_pairs_rejects_malformed_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id": "a", "article": "x", "summary": "y"}\nnot json\n')
    with pytest.raises(DataError) as err:
        load_pairs(path, "jsonl-pairs")
    assert "line 2" in str(err.value)


def test_load_pairs_rejects_empty_summary(tmp_path):
    path = tmp_path / "empty.jsonl"
    _write_jsonl(path, [
        {"id": "a", "article": "x", "summary": "y"},
        {"id": "b", "article": "x", "summary": "   "},
    ])
    with pytest.raises(DataError) as err:
        load_pairs(path, "jsonl-pairs")
    assert "empty summary at line 2" in str(err.value)


def test_load_pairs_rejects_duplicate_ids(tmp_path):
    path = tmp_path / "dup.jsonl"
    _write_jsonl(path, [
        {"id": "a", "article": "x", "summary": "y"},
        {"id": "a", "article": "z", "summary": "w"},
    ])
    with pytest.raises(DataError):
        load_pairs(path, "jsonl-pairs")


def test_cnndm_stories_format(tmp_path):
    story = tmp_path / "0001.story"
    story.write_text(
        "First paragraph of the article.\n\nSecond paragraph.\n\n"
        "@highlight\n\nkey point one\n\n@highlight\n\nkey point two\n"
    )
    pairs = load_pairs(tmp_path, "cnndm-stories")
    assert len(pairs) == 1
    assert pairs[0].id == "0001"
    assert pairs[0].article == "First paragraph of the article. Second paragraph."
    assert pairs[0].summary == "key point one . key point two"


def test_save_load_roundtrip(tmp_path):
    pairs = [DocumentPair(id="p1", article="A b c.", summary="B c.")]
    path = tmp_path / "out.jsonl"
    save_pairs(pairs, path)
    assert load_pairs(path, "jsonl-pairs") == pairs


def _pairs(n):
    return [
        DocumentPair(id=f"p{i:03d}", article=f"Article {i} text.", summary=f"Summary {i}.")
        for i in range(n)
    ]


def test_split_half_matches_hash_priority_oracle():
    for seed in (0, 1, 99):
        for n in (2, 3, 7, 10):
            pairs = _pairs(n)
            split = split_half(pairs, seed=seed)
            order = sorted((p.id for p in pairs), key=lambda i: (_hash(seed, i), i))
            take = (n + 1) // 2
            assert [p.id for p in split.train_half] == order[:take]
            assert [p.id for p in split.gen_half] == order[take:]
            assert split.train_ids.isdisjoint(split.gen_ids)
            assert len(split.train_half) + len(split.gen_half) == n


def test_split_half_is_seed_sensitive_and_deterministic():
    pairs = _pairs(20)
    a = split_half(pairs, seed=0)
    b = split_half(pairs, seed=0)
    c = split_half(pairs, seed=1)
    assert a.train_ids == b.train_ids
    assert a.train_ids != c.train_ids


def test_split_half_needs_two_pairs():
    with pytest.raises(DataError):
        split_half(_pairs(1), seed=0)


def test_load_benchmark_binary(tmp_path):
    path = tmp_path / "bench.jsonl"
    _write_jsonl(path, [
        {"id": "r1", "article": "a", "summary": "s", "label": "consistent"},
        {"id": "r2", "article": "a", "summary": "s", "label": "inconsistent"},
    ])
    records = load_benchmark(path, "factcc-test")
    assert records[0].binary_label == CONSISTENT
    assert records[1].binary_label == INCONSISTENT


def test_load_benchmark_likert(tmp_path):
    path = tmp_path / "bench.jsonl"
    _write_jsonl(path, [
        {"id": "r1", "article": "a", "summary": "s", "judgments": [5, 4, 3]},
    ])
    records = load_benchmark(path, "summeval")
    assert records[0].judgments == [5, 4, 3]
    assert records[0].numeric_score == pytest.approx(4.0)
    assert records[0].binary_label is None


def test_load_benchmark_flags(tmp_path):
    path = tmp_path / "bench.jsonl"
    _write_jsonl(path, [
        {"id": "r1", "article": "a", "summary": "s",
         "judgments": ["consistent", "inconsistent", "consistent"]},
    ])
    records = load_benchmark(path, "qags-cnndm")
    assert records[0].numeric_score == pytest.approx(2.0 / 3.0)
    assert records[0].binary_label is None


def test_benchmark_roundtrip(tmp_path):
    records = [
        BenchmarkRecord(id="r1", article="a", summary="s", judgments=[5, 5, 5],
                        numeric_score=5.0),
    ]
    path = tmp_path / "bench.jsonl"
    save_benchmark(records, path)
    assert load_benchmark(path, "summeval") == records
