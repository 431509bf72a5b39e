"""Mock backends, training-example assembly, and negative generation."""

import hashlib
import logging

import pytest

from negsum import (
    BackendError,
    ConfigError,
    DataError,
    DecodeConfig,
    DocumentPair,
    GeneratedSummary,
    Seq2SeqExample,
    TrainConfig,
    derive_seed,
    generate_negatives,
    get_backend,
    load_negatives,
    make_training_examples,
    mask_text,
    mock_fill,
    save_negatives,
    split_half,
    train_infiller,
)


def _hash(*parts):
    h = hashlib.sha256()
    for part in parts:
        b = str(part).encode("utf-8")
        h.update(str(len(b)).encode("ascii"))
        h.update(b":")
        h.update(b)
    return int.from_bytes(h.digest()[:8], "big")


def _pairs():
    return [
        DocumentPair(id=f"p{i}", article=(
            f"The town of Seaford held its annual fair on Friday {i}. "
            f"Mayor Jones opened the gates at noon and thanked the crowd. "
            f"Over {i + 2} thousand visitors came to the fair this year."),
            summary=f"Mayor Jones opened the Seaford fair to {i + 2} thousand visitors.")
        for i in range(6)
    ]


def test_mock_fill_matches_vocab_oracle():
    inp = "Summary: He won <mask_0>. Article: red blue green <mask_1> yellow"
    # vocab comes from the article segment, minus sentinel-bearing tokens
    vocab = ["red", "blue", "green", "yellow"]
    out = mock_fill(inp, seed=9)
    want0 = vocab[_hash(9, 0) % 4]
    want1 = vocab[_hash(9, 1) % 4]
    assert out == f"Summary: He won {want0}. Article: red blue green {want1} yellow"


def test_mock_fill_without_article_marker_uses_whole_input():
    inp = "alpha beta <mask_0> gamma"
    vocab = ["alpha", "beta", "gamma"]
    want = vocab[_hash(3, 0) % 3]
    assert mock_fill(inp, seed=3) == f"alpha beta {want} gamma"


def test_mock_fill_empty_vocab_fills_empty():
    assert mock_fill("<mask_0> <mask_1>", seed=0) == " "


def test_mock_fill_is_deterministic_and_seed_sensitive():
    inp = "Summary: <mask_0> Article: one two three four five six seven"
    assert mock_fill(inp, 5) == mock_fill(inp, 5)
    outs = {mock_fill(inp, s) for s in range(12)}
    assert len(outs) > 1


def test_mock_backend_generate_extracts_summary_segment():
    backend = get_backend("mock")
    inp = "Summary: The <mask_0> fell. Article: old tower cracked loudly"
    out = backend.generate(inp, DecodeConfig(), seed=1)
    assert not out.startswith("Summary:")
    assert "Article:" not in out
    assert out.endswith(" fell.")


def test_mock_backend_truncates_bare_inputs():
    backend = get_backend("mock")
    long_input = " ".join(f"w{i}" for i in range(500))
    out = backend.generate(long_input, DecodeConfig(), seed=0)
    assert len(out.split()) == backend.max_target_len


def test_mock_backend_refuses_training():
    with pytest.raises(BackendError) as err:
        train_infiller(get_backend("mock"), [Seq2SeqExample("i", "t", "p")])
    assert "backend does not support training" in str(err.value)


def test_unknown_backend():
    with pytest.raises(ConfigError):
        get_backend("no-such-backend")


def test_trainable_backend_memorizes():
    backend = get_backend("mock-trainable")
    examples = [Seq2SeqExample(input="masked input", target="the target", pair_id="p0")]
    handle = backend.train(examples, TrainConfig())
    assert backend.generate("masked input", DecodeConfig(), 0, handle=handle) == "the target"
    # unseen inputs fall back to deterministic filling
    out = backend.generate("a b <mask_0> c", DecodeConfig(), 0, handle=handle)
    assert "<mask_0>" not in out


def test_train_infiller_validations():
    with pytest.raises(DataError):
        train_infiller(get_backend("mock-trainable"), [])


def test_make_training_examples_mfma_shape():
    split = split_half(_pairs(), seed=4)
    examples = make_training_examples(split, "mfma", gamma_a=0.6, gamma_s=0.8,
                                      unit="np_ent", seed=4)
    assert len(examples) == len(split.train_half)
    by_id = {p.id: p for p in split.train_half}
    for ex in examples:
        pair = by_id[ex.pair_id]
        assert ex.target == pair.summary
        assert ex.input.startswith("Summary: ")
        assert " Article: " in ex.input
        # the input must reproduce from the documented per-pair seeds
        art = mask_text(pair.article, "np_ent", 0.6,
                        derive_seed(4, pair.id, "article", 0))
        summ = mask_text(pair.summary, "np_ent", 0.8,
                         derive_seed(4, pair.id, "summary", 0))
        assert ex.input == f"Summary: {summ.text} Article: {art.text}"


def test_make_training_examples_msm_has_no_summary_prefix():
    split = split_half(_pairs(), seed=4)
    examples = make_training_examples(split, "msm", gamma_a=0.6, gamma_s=0.8,
                                      unit="np_ent", seed=4)
    for ex in examples:
        assert not ex.input.startswith("Summary: ")
        assert "<mask_0>" in ex.input


def test_make_training_examples_rejects_mf():
    split = split_half(_pairs(), seed=4)
    with pytest.raises(ConfigError) as err:
        make_training_examples(split, "mf", 0.6, 0.8, "np_ent", 4)
    assert "zero-shot" in str(err.value)


def test_generate_negatives_counts_and_provenance():
    split = split_half(_pairs(), seed=2)
    negs = generate_negatives(get_backend("mock"), None, split, "mfma",
                              gamma_a=0.6, gamma_s=0.8, unit="np_ent",
                              n_samples=3, seed=2)
    assert len(negs) == 3 * len(split.gen_half)
    gen_ids = split.gen_ids
    for g in negs:
        assert g.pair_id in gen_ids
        assert g.method == "mfma" and g.unit == "np_ent"
        assert g.gamma_a == 0.6 and g.gamma_s == 0.8
        assert g.seed == 2
    by_pair = {}
    for g in negs:
        by_pair.setdefault(g.pair_id, []).append(g.sample_index)
    assert all(sorted(v) == [0, 1, 2] for v in by_pair.values())


def test_generate_negatives_samples_differ():
    split = split_half(_pairs(), seed=2)
    negs = generate_negatives(get_backend("mock"), None, split, "mfma",
                              gamma_a=0.6, gamma_s=0.8, unit="np_ent",
                              n_samples=4, seed=2)
    texts = {}
    for g in negs:
        texts.setdefault(g.pair_id, set()).add(g.text)
    # mask placement varies by sample index, so most pairs get >1 distinct text
    assert sum(len(v) > 1 for v in texts.values()) >= len(texts) / 2


def test_generate_negatives_method_gamma_rules():
    split = split_half(_pairs(), seed=2)
    backend = get_backend("mock")
    msm = generate_negatives(backend, None, split, "msm", gamma_a=0.6,
                             gamma_s=0.8, unit="np_ent", n_samples=1, seed=0)
    assert all(g.gamma_s is None for g in msm)
    mf = generate_negatives(backend, None, split, "mf", gamma_a=0.6,
                            gamma_s=0.8, unit="np_ent", n_samples=1, seed=0)
    assert all(g.gamma_a is None for g in mf)

    with pytest.raises(ConfigError):
        generate_negatives(backend, None, split, "mfma", gamma_a=None,
                           gamma_s=0.8, unit="np_ent", n_samples=1, seed=0)
    with pytest.raises(ConfigError):
        generate_negatives(backend, None, split, "msm", gamma_a=None,
                           gamma_s=None, unit="np_ent", n_samples=1, seed=0)
    with pytest.raises(ConfigError):
        generate_negatives(backend, None, split, "mf", gamma_a=None,
                           gamma_s=None, unit="np_ent", n_samples=1, seed=0)
    with pytest.raises(ConfigError):
        generate_negatives(backend, None, split, "mfma", gamma_a=0.6,
                           gamma_s=0.8, unit="np_ent", n_samples=0, seed=0)
    with pytest.raises(ConfigError):
        generate_negatives(backend, {"memory": {}}, split, "mf", gamma_a=None,
                           gamma_s=0.8, unit="np_ent", n_samples=1, seed=0)


def test_generate_negatives_drops_empty_output(caplog):
    class EmptyBackend:
        name = "empty"
        supports_training = False

        def generate(self, input_text, decode, seed, handle=None):
            return "   "

    split = split_half(_pairs(), seed=2)
    with caplog.at_level(logging.WARNING):
        negs = generate_negatives(EmptyBackend(), None, split, "mf",
                                  gamma_a=None, gamma_s=0.8, unit="np_ent",
                                  n_samples=1, seed=0)
    assert negs == []
    assert any("empty generation" in r.message for r in caplog.records)


def test_generated_summary_validation():
    with pytest.raises(ValueError):
        GeneratedSummary("p", "", "mf", None, 0.8, "np_ent", 0, 0)
    with pytest.raises(ValueError):
        GeneratedSummary("p", "t", "msm", 0.6, 0.8, "np_ent", 0, 0)
    with pytest.raises(ValueError):
        GeneratedSummary("p", "t", "mf", 0.6, 0.8, "np_ent", 0, 0)


def test_negatives_roundtrip_and_gamma_omission(tmp_path):
    split = split_half(_pairs(), seed=2)
    negs = generate_negatives(get_backend("mock"), None, split, "msm",
                              gamma_a=0.6, gamma_s=None, unit="np_ent",
                              n_samples=2, seed=7)
    path = tmp_path / "negs.jsonl"
    save_negatives(negs, path)
    raw = path.read_text()
    assert "gamma_s" not in raw
    assert load_negatives(path) == negs


def test_load_negatives_rejects_malformed(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"pair_id": "p", "text": "t"}\n')
    with pytest.raises(DataError):
        load_negatives(path)
    with pytest.raises(DataError):
        load_negatives(tmp_path / "missing.jsonl")
