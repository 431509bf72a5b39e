"""Scalar metrics: macro-F1, balanced accuracy, correlations, fits, diversity.

Everything here is a pure function of its arguments. Classification
metrics operate on the two-class label set {consistent, inconsistent};
similarity-based metrics take a pluggable scorer so tests can run on a
deterministic token-overlap measure while real runs use embeddings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import stdtr

from .corpus import CONSISTENT, INCONSISTENT
from .errors import ConfigError, DataError

CLASSES = (CONSISTENT, INCONSISTENT)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int


def confusion_counts(y_true: list[str], y_pred: list[str], positive: str) -> ConfusionCounts:
    """Count the confusion cells treating ``positive`` as the positive class."""
    _check_paired(y_true, y_pred)
    tp = fp = tn = fn = 0
    for t, p in zip(y_true, y_pred):
        if p == positive:
            tp, fp = (tp + 1, fp) if t == positive else (tp, fp + 1)
        else:
            fn, tn = (fn + 1, tn) if t == positive else (fn, tn + 1)
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def _check_paired(y_true, y_pred) -> None:
    if len(y_true) != len(y_pred):
        raise DataError(f"label lists differ in length: {len(y_true)} vs {len(y_pred)}")
    if not y_true:
        raise DataError("empty label lists")
    for lab in list(y_true) + list(y_pred):
        if lab not in CLASSES:
            raise DataError(f"unknown label: {lab!r}")


def macro_f1(y_true: list[str], y_pred: list[str]) -> float:
    """Unweighted mean of per-class F1 over both classes.

    A class absent from both y_true and y_pred contributes F1 = 0, which
    keeps degenerate single-class evaluations well defined.
    """
    _check_paired(y_true, y_pred)
    f1s = []
    for cls in CLASSES:
        c = confusion_counts(y_true, y_pred, positive=cls)
        denom = 2 * c.tp + c.fp + c.fn
        f1s.append(2 * c.tp / denom if denom else 0.0)
    return sum(f1s) / len(f1s)


def balanced_accuracy(y_true: list[str], y_pred: list[str]) -> float:
    """Mean per-class recall; every class must occur in y_true."""
    _check_paired(y_true, y_pred)
    recalls = []
    for cls in CLASSES:
        c = confusion_counts(y_true, y_pred, positive=cls)
        if c.tp + c.fn == 0:
            raise DataError(f"class {cls!r} absent from y_true")
        recalls.append(c.tp / (c.tp + c.fn))
    return sum(recalls) / len(recalls)


def _as_float_array(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DataError(f"{name} must be one-dimensional")
    return arr


def pearson(x, y) -> float:
    """Product-moment correlation coefficient."""
    xa, ya = _as_float_array(x, "x"), _as_float_array(y, "y")
    if len(xa) != len(ya):
        raise DataError(f"x and y differ in length: {len(xa)} vs {len(ya)}")
    if len(xa) < 3:
        raise DataError(f"need at least 3 points, got {len(xa)}")
    xd, yd = xa - xa.mean(), ya - ya.mean()
    sx, sy = math.sqrt(float(xd @ xd)), math.sqrt(float(yd @ yd))
    if sx == 0.0 or sy == 0.0:
        raise DataError("correlation undefined: zero variance")
    return float(xd @ yd) / (sx * sy)


def _mean_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks; tied values share the mean of their rank block."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Rank correlation: pearson over mean-rank transforms."""
    xa, ya = _as_float_array(x, "x"), _as_float_array(y, "y")
    if len(xa) != len(ya):
        raise DataError(f"x and y differ in length: {len(xa)} vs {len(ya)}")
    if len(xa) < 3:
        raise DataError(f"need at least 3 points, got {len(xa)}")
    return pearson(_mean_ranks(xa), _mean_ranks(ya))


def correlation_significance(r: float, n: int) -> float:
    """Two-sided p-value for H0: no association, via the t transform.

    t = r * sqrt((n-2) / (1-r^2)) with n-2 degrees of freedom. |r| = 1
    gets p = 0 by convention since the t statistic diverges.
    """
    if not -1.0 <= r <= 1.0:
        raise DataError(f"correlation out of range: {r}")
    if n < 3:
        raise DataError(f"need n >= 3 for significance, got {n}")
    if abs(r) == 1.0:
        return 0.0
    df = n - 2
    t = r * math.sqrt(df / (1.0 - r * r))
    return float(2.0 * stdtr(df, -abs(t)))


def fit_quadratic(x, y) -> tuple[tuple[float, float, float], float]:
    """Least-squares fit of y = a*x^2 + b*x + c; returns ((a, b, c), R^2).

    R^2 = 1 - SS_res/SS_tot, with the convention R^2 = 0 when SS_tot is
    zero (constant y has no variance to explain).
    """
    xa, ya = _as_float_array(x, "x"), _as_float_array(y, "y")
    if len(xa) != len(ya):
        raise DataError(f"x and y differ in length: {len(xa)} vs {len(ya)}")
    if len(np.unique(xa)) < 3:
        raise DataError("quadratic fit needs at least 3 distinct x values")
    design = np.column_stack([xa * xa, xa, np.ones_like(xa)])
    coef, *_ = np.linalg.lstsq(design, ya, rcond=None)
    residuals = ya - design @ coef
    ss_res = float(residuals @ residuals)
    centered = ya - ya.mean()
    ss_tot = float(centered @ centered)
    r2 = 0.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return (float(coef[0]), float(coef[1]), float(coef[2])), r2


class TokenOverlapScorer:
    """Dice coefficient over lowercased whitespace token sets; range [0, 1]."""

    name = "token-overlap"
    range = (0.0, 1.0)

    def sim(self, a: str, b: str) -> float:
        ta, tb = set(a.lower().split()), set(b.lower().split())
        if not ta and not tb:
            return 1.0
        if not ta or not tb:
            return 0.0
        return 2.0 * len(ta & tb) / (len(ta) + len(tb))


class EmbeddingScorer:
    """Embedding-based similarity for full-scale runs; optional dependency."""

    name = "embedding"
    range = (0.0, 1.0)

    def __init__(self, model_type: str = "roberta-large"):
        try:
            import bert_score
        except ImportError as e:
            raise ConfigError(
                "scorer 'embedding' requires the bert-score package "
                "(pip install bert-score)") from e
        self._scorer = bert_score.BERTScorer(model_type=model_type, lang="en",
                                             rescale_with_baseline=False)

    def sim(self, a: str, b: str) -> float:
        _, _, f1 = self._scorer.score([b], [a])
        return float(f1[0])


SCORERS = {
    "token-overlap": TokenOverlapScorer,
    "embedding": EmbeddingScorer,
}


def get_scorer(name: str = "token-overlap"):
    if name not in SCORERS:
        raise ConfigError(f"unknown scorer: {name!r} (expected one of {sorted(SCORERS)})")
    return SCORERS[name]()


def register_scorer(name: str, factory) -> None:
    SCORERS[name] = factory


def distance_from_reference(scorer, reference: str, negative: str) -> float:
    """Similarity of a generated negative to its reference summary.

    Reported on the similarity scale: 1 means a copy, lower means farther.
    """
    if not reference or not negative:
        raise DataError("distance needs non-empty reference and negative texts")
    return scorer.sim(reference, negative)


def diversity(samples: list[str], scorer) -> float:
    """Negated mean pairwise similarity over all unordered sample pairs."""
    if len(samples) < 2:
        raise DataError(f"diversity needs at least 2 samples, got {len(samples)}")
    sims = [scorer.sim(a, b)
            for i, a in enumerate(samples) for b in samples[i + 1:]]
    return -sum(sims) / len(sims)
