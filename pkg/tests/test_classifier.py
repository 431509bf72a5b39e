"""Pair encoding, the overlap classifier, model selection, checkpoints."""

import json
import math

import pytest

from negsum import (
    CONSISTENT,
    INCONSISTENT,
    BenchmarkRecord,
    ClassifierTrainConfig,
    ConfigError,
    DataError,
    LabeledExample,
    encode_pair,
    get_classifier_backend,
    load_checkpoint,
    save_checkpoint,
    score,
    select_model,
    train_classifier,
)
from negsum.classifier import OverlapModel, overlap_feature, save_predictions

ARTICLE = ("The council approved the harbor project on Monday. "
           "Contractors begin dredging the harbor next spring.")
GOOD = "The council approved the harbor project."
BAD = "Monday approved begin the spring harbor."


def _dataset():
    rows = []
    for i in range(4):
        art = f"{ARTICLE} Extra sentence number {i} for variety."
        rows.append(LabeledExample(f"pos{i}", art, GOOD, CONSISTENT, "reference"))
        rows.append(LabeledExample(f"neg{i}", art, BAD, INCONSISTENT, "mfma"))
    return rows


def test_encode_pair_format():
    assert encode_pair("S text", "A text") == "S text <sep> A text"


def test_encode_pair_truncates_article_tail_only():
    summary = "one two three"
    article = "a1 a2 a3 a4 a5 a6"
    out = encode_pair(summary, article, max_input_len=6)
    assert out == "one two three <sep> a1 a2"
    # summary survives even when the budget is exhausted
    out = encode_pair(summary, article, max_input_len=3)
    assert out == "one two three <sep>"
    assert encode_pair(summary, article, max_input_len=100) == (
        "one two three <sep> a1 a2 a3 a4 a5 a6")


def test_encode_pair_rejects_empty():
    with pytest.raises(DataError):
        encode_pair("", "article")
    with pytest.raises(DataError):
        encode_pair("summary", "")


def test_overlap_feature_oracle():
    art = "the cat sat on the mat"
    # unigrams {the,cat,sat} all contained -> 1.0
    # bigrams {(the,cat),(cat,sat)} both contained -> 1.0
    assert overlap_feature("the cat sat", art) == pytest.approx(1.0)
    # scrambled order keeps all unigrams but only one of two bigrams
    uni = 1.0
    bi = 1 / 2
    assert overlap_feature("sat the cat", "the cat sat") == pytest.approx(
        0.5 * (uni + bi))
    # full scramble with no surviving adjacency
    assert overlap_feature("mat the sat", "the cat sat on a mat") == pytest.approx(
        0.5 * (1.0 + 0.0))
    # single-token summary falls back to the unigram term
    assert overlap_feature("cat", art) == pytest.approx(1.0)
    assert overlap_feature("dog", art) == pytest.approx(0.0)


def test_train_produces_separating_model():
    model = train_classifier(get_classifier_backend("overlap-mock"), _dataset())
    good = score(model, GOOD, ARTICLE)
    bad = score(model, BAD, ARTICLE)
    assert good.label == CONSISTENT
    assert bad.label == INCONSISTENT
    assert good.confidence > 0.5 > bad.confidence


def test_train_computes_documented_rule():
    dataset = _dataset()
    model = train_classifier(get_classifier_backend("overlap-mock"), dataset)
    pos = [overlap_feature(ex.summary, ex.article)
           for ex in dataset if ex.label == CONSISTENT]
    neg = [overlap_feature(ex.summary, ex.article)
           for ex in dataset if ex.label == INCONSISTENT]
    mu_pos, mu_neg = sum(pos) / len(pos), sum(neg) / len(neg)
    assert model.midpoint == pytest.approx((mu_pos + mu_neg) / 2)
    assert model.temperature == pytest.approx(max(1e-6, abs(mu_pos - mu_neg) / 4))
    assert model.direction == 1.0


def test_confidence_is_a_stable_sigmoid():
    model = OverlapModel(midpoint=0.5, temperature=1e-6, direction=1.0, config={})
    hi = model.confidence("the cat sat", "the cat sat on the mat")
    lo = model.confidence("dog", "the cat sat on the mat")
    assert hi == pytest.approx(1.0)
    assert lo == pytest.approx(0.0)
    assert math.isfinite(hi) and math.isfinite(lo)


def test_train_requires_both_labels():
    only_pos = [ex for ex in _dataset() if ex.label == CONSISTENT]
    with pytest.raises(DataError):
        train_classifier(get_classifier_backend("overlap-mock"), only_pos)


def test_score_threshold_semantics():
    model = OverlapModel(midpoint=0.5, temperature=0.1, direction=1.0, config={})
    conf = model.confidence(GOOD, ARTICLE)
    assert score(model, GOOD, ARTICLE, threshold=conf).label == CONSISTENT
    assert score(model, GOOD, ARTICLE, threshold=min(conf + 1e-9, 1.0)).label == (
        CONSISTENT if conf >= min(conf + 1e-9, 1.0) else INCONSISTENT)
    with pytest.raises(ConfigError):
        score(model, GOOD, ARTICLE, threshold=1.5)


def test_unknown_classifier_backend():
    with pytest.raises(ConfigError):
        get_classifier_backend("no-such")


def _validation():
    recs = []
    for i in range(3):
        art = f"{ARTICLE} Tail {i}."
        recs.append(BenchmarkRecord(f"v-pos{i}", art, GOOD, [CONSISTENT],
                                    CONSISTENT, 1.0))
        recs.append(BenchmarkRecord(f"v-neg{i}", art, BAD, [INCONSISTENT],
                                    INCONSISTENT, 0.0))
    return recs


def test_select_model_prefers_better_and_breaks_ties_earliest():
    good = train_classifier(get_classifier_backend("overlap-mock"), _dataset())
    # a model pointed the wrong way scores worse
    bad = OverlapModel(midpoint=good.midpoint, temperature=good.temperature,
                       direction=-good.direction, config={})
    assert select_model([bad, good], _validation()) is good
    # exact ties keep the earliest checkpoint
    twin = OverlapModel(midpoint=good.midpoint, temperature=good.temperature,
                        direction=good.direction, config={})
    assert select_model([good, twin], _validation()) is good


def test_select_model_validations():
    good = train_classifier(get_classifier_backend("overlap-mock"), _dataset())
    with pytest.raises(DataError):
        select_model([], _validation())
    unbinarized = _validation()
    unbinarized[0].binary_label = None
    with pytest.raises(DataError):
        select_model([good], unbinarized)


def test_checkpoint_roundtrip(tmp_path):
    model = train_classifier(get_classifier_backend("overlap-mock"), _dataset())
    ckpt = save_checkpoint(model, tmp_path / "ckpt", dataset_hash="ff" * 32,
                           selection_metric={"balanced_accuracy": 1.0})
    loaded = load_checkpoint(ckpt)
    assert loaded == model

    manifest = json.loads((ckpt / "manifest.json").read_text())
    assert manifest["backend"] == "overlap-mock"
    assert manifest["dataset_hash"] == "ff" * 32
    assert manifest["encoding"] == {"order": "summary-first", "separator": "<sep>",
                                    "truncation": "article-tail"}
    assert manifest["selection_metric"] == {"balanced_accuracy": 1.0}
    assert manifest["config"] == ClassifierTrainConfig().as_dict()


def test_load_checkpoint_errors(tmp_path):
    with pytest.raises(DataError):
        load_checkpoint(tmp_path / "nope")
    bad = tmp_path / "bad"
    bad.mkdir()
    (bad / "model.json").write_text('{"backend": "transformer"}')
    with pytest.raises(ConfigError):
        load_checkpoint(bad)


def test_save_predictions(tmp_path):
    path = tmp_path / "preds.jsonl"
    save_predictions([{"id": "r1", "confidence": 0.9, "label": CONSISTENT,
                       "extra": "dropped"}], path)
    rows = [json.loads(line) for line in path.read_text().splitlines()]
    assert rows == [{"id": "r1", "confidence": 0.9, "label": CONSISTENT}]
