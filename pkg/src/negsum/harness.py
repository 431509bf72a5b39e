"""Benchmark binarization, evaluation runs, mask-ratio sweeps, and plots.

A sweep row is one hermetic pipeline run at a fixed (gamma_a, gamma_s):
generate negatives over the gen half, assemble a dataset, train the
classifier, and evaluate balanced accuracy on a validation benchmark,
plus the distance and diversity statistics of the generated negatives.
Row seeds derive from the sweep seed and the gamma values, so any row
can be reproduced in isolation.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classifier import get_classifier_backend, score, train_classifier
from .corpus import CONSISTENT, INCONSISTENT, BENCHMARK_SCHEMAS, BenchmarkRecord, split_half
from .dataset_builder import FilterPolicy, assemble
from .errors import BackendError, ConfigError, DataError
from .infill import get_backend, generate_negatives, make_training_examples, train_infiller
from .masker import METHODS
from .metrics import (balanced_accuracy, correlation_significance, diversity,
                      distance_from_reference, fit_quadratic, get_scorer, macro_f1,
                      pearson, spearman)
from .seeding import stable_hash
from .spanner import UNITS


def _rule_pass_through(record: BenchmarkRecord) -> str:
    if record.binary_label not in (CONSISTENT, INCONSISTENT):
        raise ConfigError(
            f"pass-through rule needs an already-binary record, got {record.id!r}")
    return record.binary_label


def _rule_summeval_min(record: BenchmarkRecord) -> str:
    if not record.judgments:
        raise ConfigError(f"record {record.id!r} has no judgments to binarize")
    for j in record.judgments:
        if not isinstance(j, int) or isinstance(j, bool) or not 1 <= j <= 5:
            raise ConfigError(f"min-rule needs Likert judgments 1..5, got {j!r}")
    return INCONSISTENT if min(record.judgments) < 5 else CONSISTENT


def _rule_any_flag(record: BenchmarkRecord) -> str:
    if not record.judgments:
        raise ConfigError(f"record {record.id!r} has no judgments to binarize")
    for j in record.judgments:
        if j not in (CONSISTENT, INCONSISTENT):
            raise ConfigError(f"any-flag rule needs consistent/inconsistent flags, got {j!r}")
    return INCONSISTENT if INCONSISTENT in record.judgments else CONSISTENT


# rule id -> record-level labeling function
BINARIZATION_RULES = {
    "pass-through": _rule_pass_through,
    "summeval-min": _rule_summeval_min,
    "any-flag": _rule_any_flag,
}

_RULE_FOR_STYLE = {"binary": "pass-through", "likert": "summeval-min", "flags": "any-flag"}


def rule_for_schema(schema: str) -> str:
    """Default binarization rule for a benchmark schema."""
    if schema not in BENCHMARK_SCHEMAS:
        raise ConfigError(
            f"unknown benchmark schema: {schema!r} (expected one of {sorted(BENCHMARK_SCHEMAS)})")
    return _RULE_FOR_STYLE[BENCHMARK_SCHEMAS[schema]]


def binarize(record: BenchmarkRecord, rule: str) -> BenchmarkRecord:
    """Return a copy of the record with binary_label set by the named rule."""
    if rule not in BINARIZATION_RULES:
        raise ConfigError(
            f"unknown binarization rule: {rule!r} (expected one of {sorted(BINARIZATION_RULES)})")
    label = BINARIZATION_RULES[rule](record)
    return dataclasses.replace(record, binary_label=label)


def binarize_all(records: list[BenchmarkRecord], rule: str) -> list[BenchmarkRecord]:
    return [binarize(r, rule) for r in records]


@dataclass(frozen=True)
class EvaluationReport:
    """One benchmark evaluation in either classification or correlation mode."""

    benchmark_id: str
    mode: str
    n: int
    config_fingerprint: str = ""
    macro_f1: float | None = None
    balanced_accuracy: float | None = None
    pearson: float | None = None
    pearson_p: float | None = None
    spearman: float | None = None
    spearman_p: float | None = None

    def metric_entries(self) -> list[dict]:
        """Flat {metric_name, value, n, p_value?} entries for report JSON."""
        if self.mode == "classification":
            return [
                {"metric_name": "macro_f1", "value": self.macro_f1, "n": self.n},
                {"metric_name": "balanced_accuracy", "value": self.balanced_accuracy,
                 "n": self.n},
            ]
        return [
            {"metric_name": "pearson", "value": self.pearson, "n": self.n,
             "p_value": self.pearson_p},
            {"metric_name": "spearman", "value": self.spearman, "n": self.n,
             "p_value": self.spearman_p},
        ]

    def as_dict(self) -> dict:
        return {"benchmark_id": self.benchmark_id, "mode": self.mode, "n": self.n,
                "config_fingerprint": self.config_fingerprint,
                "metrics": self.metric_entries()}


def predict_records(handle, records: list[BenchmarkRecord],
                    threshold: float = 0.5) -> list[dict]:
    """Score every record; rows follow the predictions JSONL schema."""
    out = []
    for r in records:
        s = score(handle, r.summary, r.article, threshold)
        out.append({"id": r.id, "confidence": s.confidence, "label": s.label})
    return out


def evaluate_classification(handle, records: list[BenchmarkRecord],
                            threshold: float = 0.5, benchmark_id: str = "",
                            config_fingerprint: str = "") -> EvaluationReport:
    """Macro-F1 and balanced accuracy of thresholded predictions."""
    if not records:
        raise DataError("no records to evaluate")
    for r in records:
        if r.binary_label is None:
            raise DataError(f"record {r.id!r} is not binarized")
    y_true = [r.binary_label for r in records]
    y_pred = [score(handle, r.summary, r.article, threshold).label for r in records]
    return EvaluationReport(
        benchmark_id=benchmark_id, mode="classification", n=len(records),
        config_fingerprint=config_fingerprint,
        macro_f1=macro_f1(y_true, y_pred),
        balanced_accuracy=balanced_accuracy(y_true, y_pred))


def evaluate_correlation(handle, records: list[BenchmarkRecord],
                         benchmark_id: str = "",
                         config_fingerprint: str = "") -> EvaluationReport:
    """Pearson and Spearman correlation of confidence with human scores."""
    if len(records) < 3:
        raise DataError(f"correlation needs at least 3 records, got {len(records)}")
    for r in records:
        if r.numeric_score is None:
            raise DataError(f"record {r.id!r} has no numeric score")
    human = [r.numeric_score for r in records]
    conf = [score(handle, r.summary, r.article).confidence for r in records]
    r_p = pearson(conf, human)
    r_s = spearman(conf, human)
    n = len(records)
    return EvaluationReport(
        benchmark_id=benchmark_id, mode="correlation", n=n,
        config_fingerprint=config_fingerprint,
        pearson=r_p, pearson_p=correlation_significance(r_p, n),
        spearman=r_s, spearman_p=correlation_significance(r_s, n))


@dataclass(frozen=True)
class SweepGrid:
    """The (gamma_a, gamma_s) grid swept at a fixed unit and method."""

    gamma_a_values: tuple = (0.2, 0.4, 0.6, 0.8, 1.0)
    gamma_s_values: tuple = (0.2, 0.4, 0.6, 0.8, 1.0)
    unit: str = "np_ent"
    method: str = "mfma"

    def __post_init__(self):
        if not self.gamma_a_values or not self.gamma_s_values:
            raise ConfigError("sweep grid axes must be non-empty")
        for g in tuple(self.gamma_a_values) + tuple(self.gamma_s_values):
            if not 0.0 <= g <= 1.0:
                raise ConfigError(f"grid gamma out of range: {g}")
        if self.unit not in UNITS:
            raise ConfigError(f"unknown unit: {self.unit!r}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method: {self.method!r}")


@dataclass(frozen=True)
class SweepRow:
    gamma_a: float
    gamma_s: float
    ba: float | None = None
    distance: float | None = None
    diversity: float | None = None
    error: str | None = None


def row_seed(sweep_seed: int, gamma_a: float, gamma_s: float) -> int:
    """Per-row seed; short-format gammas keep the key stable across parsers."""
    return stable_hash(sweep_seed, "sweep", f"{gamma_a:.6g}", f"{gamma_s:.6g}")


def run_sweep(grid: SweepGrid, pairs: list, validation: list[BenchmarkRecord],
              seed: int = 0, backend=None, scorer=None, n_samples: int = 4,
              threshold: float = 0.5, policy: FilterPolicy | None = None,
              annotator=None, classifier_backend=None) -> list[SweepRow]:
    """Run the full pipeline once per grid cell; failures flag rows, not the sweep.

    The corpus is split once per sweep so every row trains and generates
    over identical halves; all other randomness is row-local.
    """
    if n_samples < 2:
        raise ConfigError("sweep diversity needs n_samples >= 2 per pair")
    backend = backend or get_backend("mock")
    scorer = scorer or get_scorer("token-overlap")
    classifier_backend = classifier_backend or get_classifier_backend("overlap-mock")
    for r in validation:
        if r.binary_label is None:
            raise DataError(f"validation record {r.id!r} is not binarized")
    split = split_half(pairs, seed)

    rows = []
    for ga in grid.gamma_a_values:
        for gs in grid.gamma_s_values:
            rs = row_seed(seed, ga, gs)
            try:
                rows.append(_run_row(grid, split, validation, ga, gs, rs, backend,
                                     scorer, n_samples, threshold, policy,
                                     annotator, classifier_backend))
            except (BackendError, DataError) as e:
                rows.append(SweepRow(gamma_a=ga, gamma_s=gs, error=str(e)))
    return rows


def _run_row(grid, split, validation, ga, gs, rs, backend, scorer, n_samples,
             threshold, policy, annotator, classifier_backend) -> SweepRow:
    handle = None
    if grid.method in ("mfma", "msm") and backend.supports_training:
        examples = make_training_examples(split, grid.method, ga, gs, grid.unit,
                                          rs, annotator)
        handle = train_infiller(backend, examples)
    negatives = generate_negatives(
        backend, None if grid.method == "mf" else handle, split, grid.method,
        ga, gs, grid.unit, n_samples, rs, annotator=annotator)
    dataset = assemble(split, negatives, policy, seed=rs)
    cls = train_classifier(classifier_backend, dataset)

    y_true = [r.binary_label for r in validation]
    y_pred = [score(cls, r.summary, r.article, threshold).label for r in validation]
    ba = balanced_accuracy(y_true, y_pred)

    reference = {p.id: p.summary for p in split.gen_half}
    distances = [distance_from_reference(scorer, reference[g.pair_id], g.text)
                 for g in negatives]
    by_pair = defaultdict(list)
    for g in negatives:
        by_pair[g.pair_id].append(g.text)
    divs = [diversity(texts, scorer) for texts in by_pair.values() if len(texts) >= 2]
    if not divs:
        raise DataError("no pair kept enough samples to measure diversity")
    return SweepRow(gamma_a=ga, gamma_s=gs, ba=ba,
                    distance=sum(distances) / len(distances),
                    diversity=sum(divs) / len(divs))


def fit_analysis(rows: list[SweepRow], x_field: str) -> tuple[tuple, float]:
    """Quadratic fit of validation BA against distance or diversity."""
    if x_field not in ("distance", "diversity"):
        raise ConfigError(f"x_field must be 'distance' or 'diversity', got {x_field!r}")
    ok = [r for r in rows if r.error is None]
    if len(ok) < 3:
        raise DataError(f"fit needs at least 3 successful rows, got {len(ok)}")
    x = [getattr(r, x_field) for r in ok]
    y = [r.ba for r in ok]
    return fit_quadratic(x, y)


CSV_FIELDS = ("gamma_a", "gamma_s", "ba", "distance", "diversity")


def save_sweep_csv(rows: list[SweepRow], path: str | Path) -> None:
    """Write successful rows in the plot CSV schema; floats keep full precision."""
    ok = [r for r in rows if r.error is None]
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_FIELDS)
        for r in ok:
            writer.writerow([repr(float(getattr(r, field))) for field in CSV_FIELDS])


def load_sweep_csv(path: str | Path) -> list[SweepRow]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"sweep CSV does not exist: {path}")
    rows = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_FIELDS:
            raise DataError(f"unexpected CSV header in {path}: {reader.fieldnames}")
        for raw in reader:
            rows.append(SweepRow(**{field: float(raw[field]) for field in CSV_FIELDS}))
    if not rows:
        raise DataError(f"empty sweep CSV: {path}")
    return rows


def save_sweep_report(rows: list[SweepRow], path: str | Path,
                      config_fingerprint: str = "") -> None:
    """Full sweep report JSON, including flagged rows; byte-stable formatting."""
    payload = {"config_fingerprint": config_fingerprint,
               "rows": [dataclasses.asdict(r) for r in rows]}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def emit_plots(rows: list[SweepRow], out_dir: str | Path, stem: str = "sweep") -> list[Path]:
    """Write the sweep CSV plus rendered figures; the CSV is the contract.

    Produces {stem}.csv always, a BA heatmap over the gamma grid, and a
    scatter-with-fit figure per analysis axis when enough rows exist.
    """
    ok = [r for r in rows if r.error is None]
    if not ok:
        raise DataError("no successful rows to plot")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    outputs = []
    csv_path = out_dir / f"{stem}.csv"
    save_sweep_csv(rows, csv_path)
    outputs.append(csv_path)

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    a_vals = sorted({r.gamma_a for r in ok})
    s_vals = sorted({r.gamma_s for r in ok})
    mat = np.full((len(s_vals), len(a_vals)), np.nan)
    for r in ok:
        mat[s_vals.index(r.gamma_s), a_vals.index(r.gamma_a)] = r.ba
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    im = ax.imshow(mat, origin="lower", aspect="auto", cmap="viridis")
    ax.set_xticks(range(len(a_vals)), [f"{v:g}" for v in a_vals])
    ax.set_yticks(range(len(s_vals)), [f"{v:g}" for v in s_vals])
    ax.set_xlabel("article mask ratio")
    ax.set_ylabel("summary mask ratio")
    ax.set_title("validation balanced accuracy")
    fig.colorbar(im, ax=ax)
    heat_path = out_dir / f"{stem}_heatmap.png"
    fig.savefig(heat_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    outputs.append(heat_path)

    for x_field in ("distance", "diversity"):
        fig, ax = plt.subplots(figsize=(5.5, 4.5))
        x = [getattr(r, x_field) for r in ok]
        y = [r.ba for r in ok]
        ax.scatter(x, y, s=22)
        try:
            (a, b, c), r2 = fit_analysis(rows, x_field)
            xx = np.linspace(min(x), max(x), 200)
            ax.plot(xx, a * xx * xx + b * xx + c, lw=1.5)
            ax.set_title(f"BA vs {x_field} (R^2 = {r2:.3f})")
        except (ConfigError, DataError):
            ax.set_title(f"BA vs {x_field}")
        ax.set_xlabel(x_field)
        ax.set_ylabel("balanced accuracy")
        fit_path = out_dir / f"{stem}_{x_field}_fit.png"
        fig.savefig(fit_path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        outputs.append(fit_path)
    return outputs
