"""Binary factual-consistency classifier over (summary, article) pairs.

The input encoding is summary-first with a literal "<sep>" marker, and
any truncation removes article tokens from the tail only, so the short
summary always survives. Real transformer classifiers plug in through
the backend registry; the bundled "overlap-mock" backend is a logistic
rule over lexical overlap, deterministic and dependency-free, strong
enough to separate references from mask-scrambled negatives.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .corpus import CONSISTENT, INCONSISTENT, BenchmarkRecord
from .dataset_builder import LabeledExample
from .errors import ConfigError, DataError

SEPARATOR = "<sep>"


@dataclass(frozen=True)
class ClassifierTrainConfig:
    """Classifier hyperparameters; defaults follow the reference setup."""

    epochs: int = 5
    lr: float = 2e-5
    batch: int = 96

    def as_dict(self) -> dict:
        return {"epochs": self.epochs, "lr": self.lr, "batch": self.batch}


@dataclass(frozen=True)
class ConsistencyScore:
    confidence: float
    label: str


def encode_pair(summary: str, article: str, max_input_len: int | None = None) -> str:
    """Concatenate summary and article into one classifier input sequence.

    Summary comes first, then the separator, then the article. When
    max_input_len (whitespace tokens) binds, only the article tail is cut.
    """
    if not summary or not article:
        raise DataError("encode_pair needs non-empty summary and article")
    if max_input_len is None:
        return f"{summary} {SEPARATOR} {article}"
    s_toks, a_toks = summary.split(), article.split()
    budget = max_input_len - len(s_toks) - 1
    return " ".join(s_toks + [SEPARATOR] + a_toks[:max(budget, 0)])


def _ngram_containment(summary_grams: set, article_grams: set) -> float:
    if not summary_grams:
        return 0.0
    return len(summary_grams & article_grams) / len(summary_grams)


def overlap_feature(summary: str, article: str) -> float:
    """Mean of unigram and bigram containment of the summary in the article.

    The bigram term is what separates a reference from a negative built
    out of the same article vocabulary: filling masks scrambles word
    adjacency even when every individual word still occurs.
    """
    s_toks = summary.lower().split()
    a_toks = article.lower().split()
    uni = _ngram_containment(set(s_toks), set(a_toks))
    if len(s_toks) < 2:
        return uni
    s_bi = set(zip(s_toks, s_toks[1:]))
    a_bi = set(zip(a_toks, a_toks[1:]))
    return 0.5 * (uni + _ngram_containment(s_bi, a_bi))


@dataclass(frozen=True)
class OverlapModel:
    """Trained state of the overlap-mock backend: a 1-d logistic rule."""

    midpoint: float
    temperature: float
    direction: float
    config: dict

    def confidence(self, summary: str, article: str) -> float:
        z = self.direction * (overlap_feature(summary, article) - self.midpoint)
        x = z / self.temperature
        # stable sigmoid: never exponentiate a large positive argument
        if x >= 0:
            return 1.0 / (1.0 + math.exp(-x))
        e = math.exp(x)
        return e / (1.0 + e)

    def to_dict(self) -> dict:
        return {"backend": "overlap-mock", "midpoint": self.midpoint,
                "temperature": self.temperature, "direction": self.direction,
                "config": self.config}

    @classmethod
    def from_dict(cls, raw: dict) -> "OverlapModel":
        return cls(midpoint=raw["midpoint"], temperature=raw["temperature"],
                   direction=raw["direction"], config=raw["config"])


class OverlapClassifierBackend:
    """Deterministic lexical-overlap classifier for desk-scale runs."""

    name = "overlap-mock"
    max_input_len = 1024

    def train(self, dataset: list[LabeledExample], config: ClassifierTrainConfig):
        pos = [overlap_feature(ex.summary, ex.article)
               for ex in dataset if ex.label == CONSISTENT]
        neg = [overlap_feature(ex.summary, ex.article)
               for ex in dataset if ex.label == INCONSISTENT]
        mu_pos, mu_neg = sum(pos) / len(pos), sum(neg) / len(neg)
        # quarter-gap temperature keeps confidences saturated but finite
        temperature = max(1e-6, abs(mu_pos - mu_neg) / 4.0)
        direction = 1.0 if mu_pos >= mu_neg else -1.0
        return OverlapModel(midpoint=(mu_pos + mu_neg) / 2.0,
                            temperature=temperature, direction=direction,
                            config=config.as_dict())


CLASSIFIER_BACKENDS = {
    "overlap-mock": OverlapClassifierBackend,
}


def get_classifier_backend(name: str):
    if name not in CLASSIFIER_BACKENDS:
        raise ConfigError(
            f"unknown classifier backend: {name!r} "
            f"(expected one of {sorted(CLASSIFIER_BACKENDS)})")
    return CLASSIFIER_BACKENDS[name]()


def register_classifier_backend(name: str, factory) -> None:
    CLASSIFIER_BACKENDS[name] = factory


def train_classifier(backend, dataset: list[LabeledExample],
                     config: ClassifierTrainConfig | None = None):
    """Fit the classifier; the dataset must contain both labels."""
    labels = {ex.label for ex in dataset}
    if labels != {CONSISTENT, INCONSISTENT}:
        raise DataError(f"dataset must contain both labels, found {sorted(labels)}")
    return backend.train(dataset, config or ClassifierTrainConfig())


def score(handle, summary: str, article: str, threshold: float = 0.5) -> ConsistencyScore:
    """Confidence that the summary is consistent, thresholded into a label.

    The label is consistent exactly when confidence >= threshold.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ConfigError(f"threshold must be in [0, 1], got {threshold}")
    conf = float(handle.confidence(summary, article))
    label = CONSISTENT if conf >= threshold else INCONSISTENT
    return ConsistencyScore(confidence=conf, label=label)


def select_model(checkpoints: list, validation: list[BenchmarkRecord],
                 threshold: float = 0.5):
    """Pick the checkpoint with the best balanced accuracy on validation.

    Ties break toward the earliest checkpoint.
    """
    from .metrics import balanced_accuracy

    if not checkpoints:
        raise DataError("no checkpoints to select from")
    for r in validation:
        if r.binary_label is None:
            raise DataError(f"validation record {r.id!r} has no binary label")
    y_true = [r.binary_label for r in validation]
    best, best_ba = None, -1.0
    for handle in checkpoints:
        y_pred = [score(handle, r.summary, r.article, threshold).label
                  for r in validation]
        ba = balanced_accuracy(y_true, y_pred)
        if ba > best_ba:
            best, best_ba = handle, ba
    return best


def save_checkpoint(handle, out_dir: str | Path, dataset_hash: str,
                    selection_metric: dict | None = None) -> Path:
    """Write a checkpoint directory: model.json plus a manifest.

    The manifest records the dataset hash, the training config, the
    encoding conventions, and how the checkpoint was selected.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model = handle.to_dict()
    (out_dir / "model.json").write_text(
        json.dumps(model, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    manifest = {
        "backend": model["backend"],
        "dataset_hash": dataset_hash,
        "config": model["config"],
        "selection_metric": selection_metric,
        "encoding": {"order": "summary-first", "separator": SEPARATOR,
                     "truncation": "article-tail"},
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return out_dir


def load_checkpoint(ckpt_dir: str | Path):
    ckpt_dir = Path(ckpt_dir)
    model_file = ckpt_dir / "model.json"
    if not model_file.exists():
        raise DataError(f"no model.json under {ckpt_dir}")
    raw = json.loads(model_file.read_text(encoding="utf-8"))
    if raw.get("backend") != "overlap-mock":
        raise ConfigError(f"cannot load checkpoint for backend {raw.get('backend')!r}")
    return OverlapModel.from_dict(raw)


def save_predictions(predictions: list[dict], path: str | Path) -> None:
    """Write predictions JSONL: {id, confidence, label} per record."""
    with open(path, "w", encoding="utf-8") as f:
        for p in predictions:
            f.write(json.dumps({"id": p["id"], "confidence": p["confidence"],
                                "label": p["label"]}, ensure_ascii=False) + "\n")
