"""The bundled synthetic corpus: shape, determinism, and designed properties."""

from negsum import extract_spans, toy_benchmark, toy_pairs
from negsum.toydata import DISTRACTORS


def test_toy_pairs_shape_and_ids():
    pairs = toy_pairs(12, seed=0)
    assert len(pairs) == 12
    assert [p.id for p in pairs] == [f"toy-{i:03d}" for i in range(12)]
    assert len({p.id for p in pairs}) == 12


def test_toy_pairs_deterministic_and_seed_sensitive():
    assert toy_pairs(8, seed=0) == toy_pairs(8, seed=0)
    a = toy_pairs(8, seed=0)
    b = toy_pairs(8, seed=99)
    assert [p.article for p in a] != [p.article for p in b]


def test_toy_summaries_are_extractive():
    # every summary word appears in its article (modulo sentence-final
    # punctuation), which is what lets the lexical-overlap classifier
    # treat references as consistent
    for p in toy_pairs(20, seed=0):
        art_words = {t.strip(".,") for t in p.article.split()}
        assert {t.strip(".,") for t in p.summary.split()} <= art_words


def test_toy_articles_are_entity_dense():
    for p in toy_pairs(10, seed=0):
        spans = extract_spans(p.article, "np_ent")
        assert len(spans) >= 8
        assert len(extract_spans(p.summary, "np_ent")) >= 3


def test_toy_benchmark_shape():
    records = toy_benchmark(20, seed=1)
    assert len(records) == 20
    assert [r.id for r in records] == [f"bench-{i:02d}" for i in range(20)]
    for r in records:
        assert r.binary_label is None
        assert len(r.judgments) == 3
        assert all(1 <= j <= 5 for j in r.judgments)
        assert r.numeric_score == sum(r.judgments) / 3


def test_toy_benchmark_halves():
    records = toy_benchmark(20, seed=1)
    clean, corrupted = records[:10], records[10:]
    assert all(r.judgments == [5, 5, 5] for r in clean)
    # corrupted summaries contain out-of-article distractor tokens
    for r in corrupted:
        assert min(r.judgments) < 5
        assert any(tok.strip(".,") in DISTRACTORS for tok in r.summary.split())
    # severity grows, so scores never increase within the corrupted tail
    scores = [r.numeric_score for r in corrupted]
    assert scores == sorted(scores, reverse=True)
    # scores carry real variance for correlation tests
    assert len(set(scores)) >= 4


def test_toy_benchmark_odd_sizes():
    records = toy_benchmark(7, seed=1)
    clean = [r for r in records if r.judgments == [5, 5, 5]]
    assert len(clean) == 4  # ceil half clean, floor half corrupted
