"""Span selection at ratio gamma and serialization of model inputs.

The three generation methods share one masking core:

  mfma  "Summary: " + masked summary + " Article: " + masked article
  msm   masked article alone
  mf    masked summary alone

Sentinels are the literal tokens ``<mask_0>``, ``<mask_1>``, ... numbered
left to right. The serialized formats above are an external contract;
do not restyle the prefixes or spacing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import ConfigError, DataError
from .seeding import stable_hash
from .spanner import Span

METHODS = ("mfma", "msm", "mf")

SUMMARY_PREFIX = "Summary: "
ARTICLE_PREFIX = " Article: "

SENTINEL_RE = re.compile(r"<mask_(\d+)>")


def sentinel(i: int) -> str:
    return f"<mask_{i}>"


@dataclass(frozen=True)
class MaskPlan:
    """Which spans of a text get masked, and the randomness that chose them."""

    source_text: str
    all_spans: tuple
    masked_spans: tuple
    gamma: float
    rng_seed: int


@dataclass(frozen=True)
class MaskedText:
    """A text with masked spans replaced by numbered sentinels."""

    text: str
    plan: MaskPlan
    sentinel_count: int


def mask_count(n_spans: int, gamma: float) -> int:
    """Number of spans to mask at ratio gamma.

    Zero when gamma is zero or there is nothing to mask; otherwise
    round-half-up of gamma * n, floored at 1 so any positive gamma
    perturbs the text.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ConfigError(f"gamma must be in [0, 1], got {gamma}")
    if gamma == 0.0 or n_spans == 0:
        return 0
    return max(1, math.floor(gamma * n_spans + 0.5))


def select_masks(spans: list[Span], gamma: float, seed: int,
                 source_text: str = "") -> MaskPlan:
    """Pick ``mask_count`` spans as a seeded uniform sample without replacement.

    Selection is by hash priority: each index ranks by the stable hash of
    (seed, index) and the lowest-ranked indices win. This depends only on
    (spans, gamma, seed), never on process or platform state.
    """
    k = mask_count(len(spans), gamma)
    for a, b in zip(spans, spans[1:]):
        if b.start < a.end:
            raise ValueError("select_masks requires sorted, non-overlapping spans")
    ranked = sorted(range(len(spans)), key=lambda i: (stable_hash(seed, i), i))
    chosen = sorted(ranked[:k])
    return MaskPlan(
        source_text=source_text,
        all_spans=tuple(spans),
        masked_spans=tuple(spans[i] for i in chosen),
        gamma=gamma,
        rng_seed=seed,
    )


def apply_masks(text: str, plan: MaskPlan) -> MaskedText:
    """Replace each planned span with its sentinel, left to right.

    Every unmasked character passes through untouched, so the operation
    is invertible given the plan.
    """
    if plan.source_text and plan.source_text != text:
        raise DataError("mask plan was built from a different text")
    for s in plan.masked_spans:
        if text[s.start:s.end] != s.surface:
            raise DataError(
                f"mask plan does not match text at [{s.start}, {s.end}): "
                f"expected {s.surface!r}")
    parts = []
    cursor = 0
    for i, s in enumerate(plan.masked_spans):
        parts.append(text[cursor:s.start])
        parts.append(sentinel(i))
        cursor = s.end
    parts.append(text[cursor:])
    return MaskedText(text="".join(parts), plan=plan,
                      sentinel_count=len(plan.masked_spans))


def unmask(masked: MaskedText | str, plan: MaskPlan | None = None) -> str:
    """Invert apply_masks: restore each sentinel's original surface."""
    if isinstance(masked, MaskedText):
        text, plan = masked.text, masked.plan
    else:
        text = masked
    if plan is None:
        raise ValueError("unmask needs the MaskPlan for a bare string")
    surfaces = [s.surface for s in plan.masked_spans]

    def restore(m: re.Match) -> str:
        i = int(m.group(1))
        if i >= len(surfaces):
            raise DataError(f"sentinel <mask_{i}> has no span in the plan")
        return surfaces[i]

    return SENTINEL_RE.sub(restore, text)


def mask_text(text: str, unit: str, gamma: float, seed: int,
              annotator=None) -> MaskedText:
    """Extract spans, select at gamma, and apply, in one step."""
    from .spanner import extract_spans

    spans = extract_spans(text, unit, annotator)
    plan = select_masks(spans, gamma, seed, source_text=text)
    return apply_masks(text, plan)


def build_input(method: str, masked_summary=None, masked_article=None) -> str:
    """Serialize the model input for one generation method.

    mfma needs both parts, msm the article only, mf the summary only.
    The output format is exact and covered by golden files.
    """
    if method not in METHODS:
        raise ConfigError(f"unknown method: {method!r} (expected one of {METHODS})")
    summary = masked_summary.text if isinstance(masked_summary, MaskedText) else masked_summary
    article = masked_article.text if isinstance(masked_article, MaskedText) else masked_article

    if method == "mfma":
        if summary is None or article is None:
            raise ConfigError("mfma requires both a masked summary and a masked article")
        return f"{SUMMARY_PREFIX}{summary}{ARTICLE_PREFIX}{article}"
    if method == "msm":
        if article is None:
            raise ConfigError("msm requires a masked article")
        return article
    if summary is None:
        raise ConfigError("mf requires a masked summary")
    return summary
