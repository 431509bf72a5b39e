"""
Benchmark binarization and the two evaluation modes
===================================================

"""

# Human judgment formats differ per benchmark: Likert ratings, per-rater
# consistency flags, or labels that arrive already binary. Each schema
# maps to one binarization rule so every benchmark exposes the same
# binary target.
from negsum import BenchmarkRecord, binarize, rule_for_schema

for schema in ("factcc-test", "summeval", "qags-cnndm", "frank-xsum"):
    print(f"{schema}: rule = {rule_for_schema(schema)}")

likert = BenchmarkRecord(id="ex-1", article="a", summary="s",
                         judgments=[5, 5, 4], numeric_score=14 / 3)
print("min(5,5,4) < 5 ->", binarize(likert, "summeval-min").binary_label)

# Train a small classifier to have something to evaluate.
from negsum import (assemble, binarize_all, generate_negatives, get_backend,
                    get_classifier_backend, split_half, toy_benchmark,
                    toy_pairs, train_classifier)

split = split_half(toy_pairs(30, seed=6), seed=6)
negatives = generate_negatives(get_backend("mock"), None, split, "mfma",
                               0.6, 0.8, "np_ent", n_samples=3, seed=6)
handle = train_classifier(get_classifier_backend("overlap-mock"),
                          assemble(split, negatives, seed=6))

# Classification mode thresholds the confidence and reports macro-F1 and
# balanced accuracy, both robust to the heavy class skew these
# benchmarks carry.
from negsum import evaluate_classification

bench = binarize_all(toy_benchmark(20, seed=7), "summeval-min")
report = evaluate_classification(handle, bench, benchmark_id="toy")
print()
print(f"classification on {report.n} records: "
      f"macro_f1={report.macro_f1:.3f} ba={report.balanced_accuracy:.3f}")

# Correlation mode compares raw confidences against mean human scores
# with Pearson and Spearman, each paired with a two-sided significance
# level from the t distribution.
from negsum import evaluate_correlation

report = evaluate_correlation(handle, toy_benchmark(20, seed=7),
                              benchmark_id="toy")
for entry in report.metric_entries():
    print(f"{entry['metric_name']}: r={entry['value']:.3f} "
          f"p={entry['p_value']:.4f} (n={entry['n']})")
