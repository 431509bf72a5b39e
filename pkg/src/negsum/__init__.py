"""negsum: synthesize factually inconsistent summaries and catch them.

The pipeline in one breath: split a corpus in half, mask spans of the
articles and reference summaries at ratios (gamma_a, gamma_s), train a
seq2seq infiller to reconstruct the originals, run it over the held-out
half to produce plausible-but-wrong negative summaries, assemble a
binary dataset, train a consistency classifier, and evaluate it against
human-judged benchmarks.
"""

from .corpus import (BENCHMARK_SCHEMAS, CONSISTENT, INCONSISTENT, BenchmarkRecord,
                     CorpusSplit, DocumentPair, load_benchmark, load_pairs,
                     normalize_whitespace, save_benchmark, save_pairs, split_half)
from .errors import BackendError, ConfigError, DataError
from .seeding import derive_seed, stable_hash
from .spanner import (UNITS, Span, extract_spans, get_annotator, merge_overlaps,
                      register_annotator)
from .masker import (METHODS, MaskPlan, MaskedText, apply_masks, build_input,
                     mask_count, mask_text, select_masks, unmask)
from .metrics import (ConfusionCounts, TokenOverlapScorer, balanced_accuracy,
                      confusion_counts, correlation_significance,
                      distance_from_reference, diversity, fit_quadratic, get_scorer,
                      macro_f1, pearson, register_scorer, spearman)
from .infill import (DecodeConfig, GeneratedSummary, Seq2SeqExample, TrainConfig,
                     generate_negatives, get_backend, load_negatives,
                     make_training_examples, mock_fill, register_backend,
                     save_negatives, train_infiller)
from .dataset_builder import (FilterPolicy, LabeledExample, assemble,
                              dataset_fingerprint, dataset_stats, load_dataset,
                              normalized_edit_distance, save_dataset)
from .classifier import (ClassifierTrainConfig, ConsistencyScore, encode_pair,
                         get_classifier_backend, load_checkpoint,
                         register_classifier_backend, save_checkpoint, score,
                         select_model, train_classifier)
from .harness import (BINARIZATION_RULES, EvaluationReport, SweepGrid, SweepRow,
                      binarize, binarize_all, emit_plots, evaluate_classification,
                      evaluate_correlation, fit_analysis, load_sweep_csv,
                      rule_for_schema, run_sweep, save_sweep_csv, save_sweep_report)
from .config import Config, default_config, fingerprint, load_config
from .toydata import toy_benchmark, toy_pairs

__version__ = "0.1.0"

__all__ = [
    "BENCHMARK_SCHEMAS", "BINARIZATION_RULES", "BackendError",
    "BenchmarkRecord", "ClassifierTrainConfig", "Config", "ConfigError",
    "ConfusionCounts", "ConsistencyScore", "CorpusSplit", "CONSISTENT", "DataError", "DecodeConfig",
    "DocumentPair", "EvaluationReport", "FilterPolicy", "GeneratedSummary",
    "INCONSISTENT", "LabeledExample", "METHODS", "MaskPlan", "MaskedText",
    "Seq2SeqExample", "Span", "SweepGrid", "SweepRow", "TokenOverlapScorer",
    "TrainConfig", "UNITS", "apply_masks", "assemble", "balanced_accuracy",
    "binarize", "binarize_all", "confusion_counts", "build_input", "correlation_significance",
    "dataset_fingerprint", "dataset_stats", "default_config", "derive_seed",
    "distance_from_reference", "diversity", "emit_plots", "encode_pair",
    "evaluate_classification", "evaluate_correlation", "extract_spans",
    "fingerprint", "fit_analysis", "fit_quadratic", "generate_negatives",
    "get_annotator", "get_backend", "get_classifier_backend", "get_scorer",
    "load_benchmark", "load_checkpoint", "load_config", "load_dataset",
    "load_negatives", "load_pairs", "load_sweep_csv", "macro_f1", "mask_count",
    "mask_text", "make_training_examples", "merge_overlaps", "mock_fill",
    "normalize_whitespace", "normalized_edit_distance", "pearson",
    "register_annotator", "register_backend", "register_classifier_backend",
    "register_scorer", "rule_for_schema", "run_sweep", "save_benchmark",
    "save_checkpoint", "save_dataset", "save_negatives", "save_pairs",
    "save_sweep_csv", "save_sweep_report", "score", "select_masks", "select_model",
    "spearman", "split_half", "stable_hash", "toy_benchmark", "toy_pairs",
    "train_classifier", "train_infiller", "unmask",
]
