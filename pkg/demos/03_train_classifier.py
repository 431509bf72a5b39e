"""
Assembling a dataset and training the consistency classifier
============================================================

"""

# References from the training half become consistent examples;
# synthesized negatives from the generation half become inconsistent
# ones. assemble() enforces that separation and shuffles the merge with
# a seeded hash order, so the dataset is reproducible.
from negsum import (FilterPolicy, assemble, dataset_fingerprint, dataset_stats,
                    generate_negatives, get_backend, split_half, toy_pairs)

pairs = toy_pairs(30, seed=4)
split = split_half(pairs, seed=4)
negatives = generate_negatives(get_backend("mock"), None, split, "mfma",
                               gamma_a=0.6, gamma_s=0.8, unit="np_ent",
                               n_samples=3, seed=4)

# The filter policy drops degenerate negatives; min_edit_distinctness
# rejects near-copies of the reference summary.
policy = FilterPolicy(min_edit_distinctness=0.1)
dataset = assemble(split, negatives, policy, seed=4)

stats = dataset_stats(dataset)
print(f"dataset: {stats['total']} examples, labels {stats['by_label']}, "
      f"class ratio {stats['class_ratio']:.2f}")
print("fingerprint:", dataset_fingerprint(dataset)[:16], "...")

# The overlap-mock classifier scores a summary by n-gram containment in
# its article, calibrated on the class means. It is the fast stand-in
# for a fine-tuned entailment model and exercises every interface the
# real one would.
from negsum import get_classifier_backend, score, train_classifier

handle = train_classifier(get_classifier_backend("overlap-mock"), dataset)

pair = split.gen_half[0]
scrambled = " ".join(reversed(pair.summary.split()))
for name, summary in (("reference", pair.summary), ("scrambled", scrambled)):
    s = score(handle, summary, pair.article)
    print(f"{name}: label={s.label} confidence={s.confidence:.3f}")

# Checkpoints persist the model weights next to a manifest recording the
# dataset hash and training configuration.
from pathlib import Path
from tempfile import TemporaryDirectory

from negsum import load_checkpoint, save_checkpoint

with TemporaryDirectory() as tmp:
    ckpt = save_checkpoint(handle, Path(tmp) / "ckpt",
                           dataset_hash=dataset_fingerprint(dataset))
    reloaded = load_checkpoint(ckpt)
    s = score(reloaded, pair.summary, pair.article)
    print(f"reloaded checkpoint agrees: confidence={s.confidence:.3f}")
