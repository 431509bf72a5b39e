"""Seq2seq backend contract, training objectives, and negative generation.

Three ways to synthesize an inconsistent summary from a masked pair:

  mfma  reconstruct the summary from masked summary + masked article
  msm   generate a summary from the masked article alone
  mf    fill the masked summary with no article context, zero-shot

Real encoder-decoder models plug in through the backend registry. Two
mock backends ship with the package so every pipeline stage runs at desk
scale with zero downloads: "mock" is a zero-shot hash-driven filler and
"mock-trainable" memorizes its training examples.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .corpus import CorpusSplit
from .errors import BackendError, ConfigError, DataError
from .masker import METHODS, SENTINEL_RE, SUMMARY_PREFIX, ARTICLE_PREFIX, build_input, mask_text
from .seeding import derive_seed, stable_hash
from .spanner import UNITS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    """Infiller training hyperparameters; defaults follow the reference setup."""

    epochs: int = 5
    batch: int = 48
    max_in: int = 1024
    max_tgt: int = 140

    def as_dict(self) -> dict:
        return {"epochs": self.epochs, "batch": self.batch,
                "max_in": self.max_in, "max_tgt": self.max_tgt}


@dataclass(frozen=True)
class DecodeConfig:
    """Decoding is deterministic beam search; sample diversity comes from masks."""

    beam_size: int = 4


@dataclass(frozen=True)
class Seq2SeqExample:
    input: str
    target: str
    pair_id: str


@dataclass(frozen=True)
class GeneratedSummary:
    """One synthesized negative with full regeneration provenance."""

    pair_id: str
    text: str
    method: str
    gamma_a: float | None
    gamma_s: float | None
    unit: str
    sample_index: int
    seed: int

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"bad method: {self.method!r}")
        if self.unit not in UNITS:
            raise ValueError(f"bad unit: {self.unit!r}")
        if not self.text:
            raise ValueError("generated summary text is empty")
        if self.method == "msm" and self.gamma_s is not None:
            raise ValueError("msm does not mask the summary; gamma_s must be absent")
        if self.method == "mf" and self.gamma_a is not None:
            raise ValueError("mf does not use the article; gamma_a must be absent")


def mock_fill(input_text: str, seed: int) -> str:
    """Replace every sentinel with a deterministically chosen vocabulary token.

    The fill for ``<mask_i>`` is vocab[stable_hash(seed, i) % len(vocab)]
    where vocab is the ordered set of whitespace tokens of the article
    segment (the part after the first " Article: " marker) when the input
    has one, else of the whole input. Sentinel-bearing tokens never enter
    the vocabulary. An empty vocabulary fills with the empty string.
    """
    idx = input_text.find(ARTICLE_PREFIX)
    segment = input_text[idx + len(ARTICLE_PREFIX):] if idx != -1 else input_text
    vocab = _vocabulary(segment) or _vocabulary(input_text)

    def fill(m) -> str:
        if not vocab:
            return ""
        return vocab[stable_hash(seed, int(m.group(1))) % len(vocab)]

    return SENTINEL_RE.sub(fill, input_text)


def _vocabulary(text: str) -> list[str]:
    seen = {}
    for tok in text.split():
        if SENTINEL_RE.search(tok):
            continue
        seen.setdefault(tok, None)
    return list(seen)


def _summary_segment(input_text: str) -> str | None:
    """Extract the summary part of an mfma-format input, None otherwise."""
    if not input_text.startswith(SUMMARY_PREFIX):
        return None
    idx = input_text.find(ARTICLE_PREFIX)
    if idx == -1:
        return None
    return input_text[len(SUMMARY_PREFIX):idx]


class MockFillBackend:
    """Zero-shot deterministic filler standing in for a pre-trained denoiser."""

    name = "mock"
    supports_training = False
    max_input_len = 1024
    max_target_len = 140

    def train(self, examples, config):
        raise BackendError("backend does not support training")

    def generate(self, input_text: str, decode: DecodeConfig, seed: int,
                 handle=None) -> str:
        filled = mock_fill(input_text, seed)
        summary = _summary_segment(filled)
        if summary is not None:
            return summary
        # summarization-shaped inputs: keep a target-length head
        tokens = filled.split()
        return " ".join(tokens[:self.max_target_len])


class MemorizingFillBackend(MockFillBackend):
    """Trainable mock: memorizes (input, target) pairs, falls back to filling."""

    name = "mock-trainable"
    supports_training = True

    def train(self, examples, config):
        if config is None:
            config = TrainConfig()
        return {"memory": {ex.input: ex.target for ex in examples},
                "config": config.as_dict()}

    def generate(self, input_text: str, decode: DecodeConfig, seed: int,
                 handle=None) -> str:
        if handle is not None:
            hit = handle["memory"].get(input_text)
            if hit is not None:
                return hit
        return super().generate(input_text, decode, seed, handle=None)


BACKENDS = {
    "mock": MockFillBackend,
    "mock-trainable": MemorizingFillBackend,
}


def get_backend(name: str):
    if name not in BACKENDS:
        raise ConfigError(f"unknown backend: {name!r} (expected one of {sorted(BACKENDS)})")
    return BACKENDS[name]()


def register_backend(name: str, factory) -> None:
    BACKENDS[name] = factory


def make_training_examples(split: CorpusSplit, method: str, gamma_a: float,
                           gamma_s: float, unit: str, seed: int,
                           annotator=None) -> list:
    """Build one training example per train-half pair.

    The target is always the original reference summary; the input is the
    method's masked serialization with per-pair seeds at sample index 0.
    """
    if method == "mf":
        raise ConfigError("method 'mf' is zero-shot and is not trained")
    if method not in METHODS:
        raise ConfigError(f"unknown method: {method!r} (expected one of {METHODS})")
    examples = []
    for pair in split.train_half:
        art = mask_text(pair.article, unit, gamma_a,
                        derive_seed(seed, pair.id, "article", 0), annotator)
        if method == "mfma":
            summ = mask_text(pair.summary, unit, gamma_s,
                             derive_seed(seed, pair.id, "summary", 0), annotator)
            inp = build_input("mfma", masked_summary=summ, masked_article=art)
        else:
            inp = build_input("msm", masked_article=art)
        examples.append(Seq2SeqExample(input=inp, target=pair.summary, pair_id=pair.id))
    return examples


def train_infiller(backend, examples: list, config: TrainConfig | None = None):
    """Fit the infiller backend; returns an opaque model handle."""
    if not backend.supports_training:
        raise BackendError("backend does not support training")
    if not examples:
        raise DataError("no training examples")
    return backend.train(examples, config or TrainConfig())


def generate_negatives(backend, handle, split: CorpusSplit, method: str,
                       gamma_a: float | None, gamma_s: float | None, unit: str,
                       n_samples: int, seed: int, decode: DecodeConfig | None = None,
                       annotator=None) -> list[GeneratedSummary]:
    """Generate n_samples negatives per gen-half pair.

    Every sample gets its own mask placement through the per-pair seed
    derivation, so samples differ without stochastic decoding. Empty
    generations are dropped with a warning; they never raise.
    """
    if method not in METHODS:
        raise ConfigError(f"unknown method: {method!r} (expected one of {METHODS})")
    if n_samples < 1:
        raise ConfigError(f"n_samples must be >= 1, got {n_samples}")
    if method == "mf" and handle is not None:
        raise ConfigError("mf generation is zero-shot; a trained handle does not apply")
    if method == "msm":
        gamma_s = None
    if method == "mf":
        gamma_a = None
    if method in ("mfma", "msm") and gamma_a is None:
        raise ConfigError(f"method {method!r} requires gamma_a")
    if method in ("mfma", "mf") and gamma_s is None:
        raise ConfigError(f"method {method!r} requires gamma_s")
    decode = decode or DecodeConfig()

    out = []
    for pair in split.gen_half:
        for k in range(n_samples):
            masked_summary = masked_article = None
            if method in ("mfma", "msm"):
                masked_article = mask_text(pair.article, unit, gamma_a,
                                           derive_seed(seed, pair.id, "article", k),
                                           annotator)
            if method in ("mfma", "mf"):
                masked_summary = mask_text(pair.summary, unit, gamma_s,
                                           derive_seed(seed, pair.id, "summary", k),
                                           annotator)
            inp = build_input(method, masked_summary=masked_summary,
                              masked_article=masked_article)
            text = backend.generate(inp, decode, derive_seed(seed, pair.id, "decode", k),
                                    handle=handle)
            if not text or not text.strip():
                logger.warning("dropping empty generation for pair %s sample %d",
                               pair.id, k)
                continue
            out.append(GeneratedSummary(
                pair_id=pair.id, text=text, method=method,
                gamma_a=gamma_a, gamma_s=gamma_s, unit=unit,
                sample_index=k, seed=seed))
    return out


def save_negatives(negatives: list[GeneratedSummary], path: str | Path) -> None:
    """Write negatives as JSONL; gamma fields are omitted when absent."""
    with open(path, "w", encoding="utf-8") as f:
        for g in negatives:
            row = {"pair_id": g.pair_id, "text": g.text, "method": g.method}
            if g.gamma_a is not None:
                row["gamma_a"] = g.gamma_a
            if g.gamma_s is not None:
                row["gamma_s"] = g.gamma_s
            row.update({"unit": g.unit, "sample_index": g.sample_index, "seed": g.seed})
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


def load_negatives(path: str | Path) -> list[GeneratedSummary]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"negatives file does not exist: {path}")
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
                out.append(GeneratedSummary(
                    pair_id=str(raw["pair_id"]), text=raw["text"], method=raw["method"],
                    gamma_a=raw.get("gamma_a"), gamma_s=raw.get("gamma_s"),
                    unit=raw["unit"], sample_index=int(raw["sample_index"]),
                    seed=int(raw["seed"])))
            except (json.JSONDecodeError, KeyError, ValueError) as e:
                raise DataError(f"malformed record at line {lineno}: {e}") from e
    if not out:
        raise DataError(f"empty negatives file: {path}")
    return out
