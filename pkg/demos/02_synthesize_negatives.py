"""
Synthesizing inconsistent summaries three ways
==============================================

"""

# Negatives are summaries that look fluent but contradict their article.
# They are produced by masking and then refilling text. The corpus is
# split in half first: one half trains the infiller, the other receives
# the generated negatives, so no classifier example leaks into both.
from negsum import split_half, toy_pairs

pairs = toy_pairs(12, seed=0)
split = split_half(pairs, seed=0)
print(f"{len(pairs)} pairs -> {len(split.train_half)} train / "
      f"{len(split.gen_half)} generate")

# Three input recipes share one seq2seq interface. mfma conditions on a
# masked summary plus a masked article; msm sees only the masked
# article; mf perturbs the summary alone and needs no training at all.
from negsum import build_input, derive_seed, mask_text

pair = split.gen_half[0]
art = mask_text(pair.article, "np_ent", 0.6, derive_seed(0, pair.id, "article", 0))
summ = mask_text(pair.summary, "np_ent", 0.8, derive_seed(0, pair.id, "summary", 0))
print()
print("mfma input:", build_input("mfma", masked_summary=summ, masked_article=art)[:120], "...")
print("msm input: ", build_input("msm", masked_article=art)[:120], "...")
print("mf input:  ", build_input("mf", masked_summary=summ)[:120], "...")

# The mock backend fills sentinels deterministically from the article's
# own vocabulary; it stands in for a fine-tuned seq2seq model so the
# whole pipeline runs in milliseconds.
from negsum import generate_negatives, get_backend

backend = get_backend("mock")
negatives = generate_negatives(backend, None, split, method="mfma",
                               gamma_a=0.6, gamma_s=0.8, unit="np_ent",
                               n_samples=2, seed=0)
print()
print(f"{len(negatives)} negatives ({2} per generation pair)")
g = negatives[0]
print(f"first: pair={g.pair_id} sample={g.sample_index} gamma_a={g.gamma_a}")
print("  reference:", next(p for p in split.gen_half if p.id == g.pair_id).summary)
print("  negative: ", g.text)

# Provenance travels with every sample, so a saved negatives file can be
# audited long after the run.
from pathlib import Path
from tempfile import TemporaryDirectory

from negsum import load_negatives, save_negatives

with TemporaryDirectory() as tmp:
    path = Path(tmp) / "negatives.jsonl"
    save_negatives(negatives, path)
    again = load_negatives(path)
    assert again == negatives
    print()
    print(f"round-tripped {len(again)} negatives through {path.name}")
