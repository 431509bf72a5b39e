"""Mask counting, seeded span selection, sentinel splicing, and input formats."""

import hashlib
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negsum import (
    ConfigError,
    DataError,
    MaskedText,
    Span,
    apply_masks,
    build_input,
    extract_spans,
    mask_count,
    mask_text,
    select_masks,
    unmask,
)

TEXT = "Alice met Bob at the old library on Tuesday and they argued about a book."


def _hash(*parts):
    h = hashlib.sha256()
    for part in parts:
        b = str(part).encode("utf-8")
        h.update(str(len(b)).encode("ascii"))
        h.update(b":")
        h.update(b)
    return int.from_bytes(h.digest()[:8], "big")


def test_mask_count_pinned_values():
    # (n, gamma) -> expected
    table = [
        (10, 0.0, 0), (0, 0.5, 0), (0, 0.0, 0),
        (10, 1.0, 10), (1, 1.0, 1),
        (10, 0.6, 6), (10, 0.55, 6), (10, 0.05, 1),
        (3, 0.5, 2),   # 1.5 rounds half up
        (5, 0.5, 3),   # 2.5 rounds half up
        (7, 0.2, 1), (7, 0.8, 6),
        (100, 0.004, 1),  # floor would give 0; clamps to 1
    ]
    for n, gamma, want in table:
        assert mask_count(n, gamma) == want, (n, gamma)


def test_mask_count_rejects_bad_gamma():
    for gamma in (-0.1, 1.1, 2.0):
        with pytest.raises(ConfigError):
            mask_count(5, gamma)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 200), st.floats(0.0, 1.0, allow_nan=False))
def test_mask_count_properties(n, gamma):
    k = mask_count(n, gamma)
    assert 0 <= k <= n or (n == 0 and k == 0)
    if gamma == 0.0 or n == 0:
        assert k == 0
    else:
        assert k >= 1
        assert k == max(1, math.floor(gamma * n + 0.5))
    if gamma == 1.0:
        assert k == n


def test_mask_count_monotone_in_gamma():
    for n in (1, 4, 9, 33):
        counts = [mask_count(n, g / 20) for g in range(21)]
        assert counts == sorted(counts)


def _spans(text):
    return extract_spans(text, "token")


def test_select_masks_matches_hash_priority_oracle():
    spans = _spans(TEXT)
    for seed in (0, 7, 123456):
        for gamma in (0.2, 0.5, 0.8, 1.0):
            plan = select_masks(spans, gamma, seed, source_text=TEXT)
            k = mask_count(len(spans), gamma)
            ranked = sorted(range(len(spans)), key=lambda i: (_hash(seed, i), i))
            want = sorted(ranked[:k])
            assert plan.masked_spans == tuple(spans[i] for i in want)
            assert plan.gamma == gamma and plan.rng_seed == seed
            # chosen spans come back in document order
            starts = [s.start for s in plan.masked_spans]
            assert starts == sorted(starts)


def test_select_masks_rejects_overlapping_spans():
    bad = [Span(0, 5, "token", TEXT[0:5]), Span(3, 8, "token", TEXT[3:8])]
    with pytest.raises(ValueError):
        select_masks(bad, 0.5, 0)


def test_apply_masks_numbers_sentinels_left_to_right():
    spans = _spans(TEXT)
    plan = select_masks(spans, 0.4, 3, source_text=TEXT)
    masked = apply_masks(TEXT, plan)
    assert masked.sentinel_count == len(plan.masked_spans)
    seen = [int(m.group(1)) for m in
            __import__("re").finditer(r"<mask_(\d+)>", masked.text)]
    assert seen == list(range(masked.sentinel_count))


def test_apply_masks_rejects_foreign_text():
    spans = _spans(TEXT)
    plan = select_masks(spans, 0.5, 0, source_text=TEXT)
    with pytest.raises(DataError):
        apply_masks("A different text entirely, not the planned one.", plan)


def test_apply_masks_rejects_stale_surfaces():
    plan = select_masks([Span(0, 5, "token", "XXXXX")], 1.0, 0)
    with pytest.raises(DataError):
        apply_masks(TEXT, plan)


def test_unmask_round_trip():
    for unit in ("token", "np_ent", "sentence"):
        for gamma in (0.0, 0.3, 0.7, 1.0):
            for seed in (0, 11):
                masked = mask_text(TEXT, unit, gamma, seed)
                assert unmask(masked) == TEXT
                assert unmask(masked.text, masked.plan) == TEXT


def test_unmask_needs_plan_for_bare_string():
    with pytest.raises(ValueError):
        unmask("some <mask_0> text")


def test_unmask_rejects_out_of_range_sentinel():
    masked = mask_text(TEXT, "token", 0.2, 0)
    with pytest.raises(DataError):
        unmask(masked.text + " <mask_99>", masked.plan)


def test_gamma_zero_is_identity():
    masked = mask_text(TEXT, "token", 0.0, 5)
    assert masked.text == TEXT
    assert masked.sentinel_count == 0


def test_gamma_one_masks_every_span():
    masked = mask_text(TEXT, "token", 1.0, 5)
    assert masked.sentinel_count == len(TEXT.split())
    assert "Alice" not in masked.text


def test_build_input_formats_exactly():
    s = MaskedTextStub("He won <mask_0>.")
    a = MaskedTextStub("The game ended <mask_0> at <mask_1>.")
    assert build_input("mfma", masked_summary=s.text, masked_article=a.text) == (
        "Summary: He won <mask_0>. Article: The game ended <mask_0> at <mask_1>."
    )
    assert build_input("msm", masked_article=a.text) == a.text
    assert build_input("mf", masked_summary=s.text) == s.text


class MaskedTextStub:
    def __init__(self, text):
        self.text = text


def test_build_input_accepts_masked_text_objects():
    masked = mask_text(TEXT, "token", 0.3, 2)
    assert build_input("mf", masked_summary=masked) == masked.text


def test_build_input_rejects_missing_parts():
    with pytest.raises(ConfigError):
        build_input("mfma", masked_summary="x")
    with pytest.raises(ConfigError):
        build_input("msm", masked_summary="x")
    with pytest.raises(ConfigError):
        build_input("mf", masked_article="x")
    with pytest.raises(ConfigError):
        build_input("other", masked_summary="x", masked_article="y")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(
    ["Paris", "the", "tall", "tower", "fell", "on", "May", "9,", "1999", "quietly."]),
    min_size=1, max_size=25),
    st.floats(0.0, 1.0, allow_nan=False), st.integers(0, 2 ** 32))
def test_mask_unmask_identity_property(words, gamma, seed):
    text = " ".join(words)
    for unit in ("token", "np_ent"):
        masked = mask_text(text, unit, gamma, seed)
        assert unmask(masked) == text
