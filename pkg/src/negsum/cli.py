"""Command-line interface: ten verbs covering the whole pipeline.

Every verb reads one TOML config (plus flag overrides), derives all
randomness from the single seed, writes its outputs under --out-dir, and
drops a <verb>.manifest.json recording the config fingerprint and the
files it produced. Exit codes: 0 ok, 1 config error, 2 data error,
3 backend error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import classifier as cls_mod
from . import config as config_mod
from . import harness
from .corpus import load_benchmark, load_pairs, save_pairs, split_half
from .dataset_builder import (FilterPolicy, assemble, dataset_fingerprint,
                              dataset_stats, load_dataset, save_dataset)
from .errors import BackendError, ConfigError, DataError
from .infill import (DecodeConfig, TrainConfig, generate_negatives, get_backend,
                     load_negatives, make_training_examples, save_negatives,
                     train_infiller)
from .masker import build_input, mask_text
from .metrics import get_scorer
from .seeding import derive_seed
from .spanner import get_annotator


class _Parser(argparse.ArgumentParser):
    """Usage problems are config errors (exit 1), not argparse's exit 2."""

    def error(self, message):
        raise ConfigError(message)


def _add_common(p: _Parser) -> None:
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--out-dir", default=".", help="output directory")
    p.add_argument("--seed", type=int, help="override the config seed")


def _add_corpus_flags(p: _Parser) -> None:
    p.add_argument("--corpus", help="override [corpus] path")
    p.add_argument("--corpus-format", help="override [corpus] format")


def _add_masking_flags(p: _Parser) -> None:
    p.add_argument("--unit", help="override [masking] unit")
    p.add_argument("--gamma-a", type=float, help="override [masking] gamma_a")
    p.add_argument("--gamma-s", type=float, help="override [masking] gamma_s")
    p.add_argument("--annotator", help="override [masking] annotator")


def _add_infiller_flags(p: _Parser) -> None:
    p.add_argument("--method", help="override [infiller] method")
    p.add_argument("--backend", help="override [infiller] backend")
    p.add_argument("--n-samples", type=int, help="override [infiller] n_samples")


def build_parser() -> _Parser:
    parser = _Parser(prog="negsum",
                     description="Synthesize inconsistent summaries and train "
                                 "factual-consistency classifiers.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("split", parents=[], help="split a corpus into halves")
    _add_common(p)
    _add_corpus_flags(p)

    p = sub.add_parser("mask-preview", help="show masked texts and method inputs")
    _add_common(p)
    _add_corpus_flags(p)
    _add_masking_flags(p)
    p.add_argument("--pair-id", help="pair to preview (default: first)")
    p.add_argument("--sample-index", type=int, default=0)

    p = sub.add_parser("train-infiller", help="fit the infiller backend")
    _add_common(p)
    _add_corpus_flags(p)
    _add_masking_flags(p)
    _add_infiller_flags(p)

    p = sub.add_parser("generate", help="generate negative summaries")
    _add_common(p)
    _add_corpus_flags(p)
    _add_masking_flags(p)
    _add_infiller_flags(p)
    p.add_argument("--infiller-handle", help="handle JSON from train-infiller")

    p = sub.add_parser("build-dataset", help="assemble the classifier dataset")
    _add_common(p)
    _add_corpus_flags(p)
    p.add_argument("--negatives", help="negatives JSONL (default: <out-dir>/negatives.jsonl)")
    p.add_argument("--min-edit-distinctness", type=float, default=0.0)
    p.add_argument("--purge-generated", action="store_true",
                   help="delete the negatives file after assembly")

    p = sub.add_parser("train-classifier", help="train the consistency classifier")
    _add_common(p)
    p.add_argument("--dataset", help="dataset JSONL (default: <out-dir>/dataset.jsonl)")

    p = sub.add_parser("evaluate", help="evaluate a checkpoint on a benchmark")
    _add_common(p)
    p.add_argument("--checkpoint", help="checkpoint dir (default: <out-dir>/checkpoint)")
    p.add_argument("--benchmark", help="override [evaluation] benchmark path")
    p.add_argument("--schema", help="override [evaluation] schema")
    p.add_argument("--threshold", type=float, help="override [classifier] threshold")

    p = sub.add_parser("sweep", help="run the mask-ratio grid sweep")
    _add_common(p)
    _add_corpus_flags(p)
    _add_masking_flags(p)
    _add_infiller_flags(p)
    p.add_argument("--benchmark", help="override [evaluation] benchmark path")
    p.add_argument("--schema", help="override [evaluation] schema")

    p = sub.add_parser("analyze", help="fit BA against distance and diversity")
    _add_common(p)
    p.add_argument("--sweep-csv", help="sweep CSV (default: <out-dir>/sweep.csv)")

    p = sub.add_parser("plot", help="render figures from a sweep CSV")
    _add_common(p)
    p.add_argument("--sweep-csv", help="sweep CSV (default: <out-dir>/sweep.csv)")

    return parser


def _load_config(args) -> config_mod.Config:
    cfg = config_mod.load_config(args.config) if args.config else config_mod.default_config()
    if getattr(args, "seed", None) is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)

    def patch(section: str, **kv):
        live = {k: v for k, v in kv.items() if v is not None}
        if live:
            return dataclasses.replace(
                cfg, **{section: dataclasses.replace(getattr(cfg, section), **live)})
        return cfg

    cfg = patch("corpus", path=getattr(args, "corpus", None),
                format=getattr(args, "corpus_format", None))
    cfg = patch("masking", unit=getattr(args, "unit", None),
                gamma_a=getattr(args, "gamma_a", None),
                gamma_s=getattr(args, "gamma_s", None),
                annotator=getattr(args, "annotator", None))
    cfg = patch("infiller", method=getattr(args, "method", None),
                backend=getattr(args, "backend", None),
                n_samples=getattr(args, "n_samples", None))
    cfg = patch("evaluation", benchmark=getattr(args, "benchmark", None),
                schema=getattr(args, "schema", None))
    cfg = patch("classifier", threshold=getattr(args, "threshold", None))
    return config_mod.validate_config(cfg)


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, verb: str, cfg, inputs: dict, outputs: list,
                    extra: dict | None = None) -> Path:
    manifest = {
        "verb": verb,
        "seed": cfg.seed,
        "config_fingerprint": config_mod.fingerprint(cfg),
        "config": config_mod.config_to_dict(cfg),
        "inputs": inputs,
        "outputs": [str(p) for p in outputs],
    }
    if extra:
        manifest["extra"] = extra
    path = out / f"{verb}.manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path


def _corpus_pairs(cfg):
    if not cfg.corpus.path:
        raise ConfigError("no corpus path configured ([corpus] path or --corpus)")
    return load_pairs(cfg.corpus.path, cfg.corpus.format)


def _cmd_split(args, cfg) -> None:
    out = _out_dir(args)
    pairs = _corpus_pairs(cfg)
    split = split_half(pairs, cfg.seed)
    train_path, gen_path = out / "train_half.jsonl", out / "gen_half.jsonl"
    save_pairs(split.train_half, train_path)
    save_pairs(split.gen_half, gen_path)
    print(f"split {len(pairs)} pairs -> {len(split.train_half)} train / "
          f"{len(split.gen_half)} gen")
    _write_manifest(out, "split", cfg, {"corpus": cfg.corpus.path},
                    [train_path, gen_path],
                    {"n_train": len(split.train_half), "n_gen": len(split.gen_half)})


def _cmd_mask_preview(args, cfg) -> None:
    out = _out_dir(args)
    pairs = _corpus_pairs(cfg)
    if args.pair_id:
        matching = [p for p in pairs if p.id == args.pair_id]
        if not matching:
            raise DataError(f"no pair with id {args.pair_id!r}")
        pair = matching[0]
    else:
        pair = pairs[0]
    annotator = get_annotator(cfg.masking.annotator)
    k = args.sample_index
    art = mask_text(pair.article, cfg.masking.unit, cfg.masking.gamma_a,
                    derive_seed(cfg.seed, pair.id, "article", k), annotator)
    summ = mask_text(pair.summary, cfg.masking.unit, cfg.masking.gamma_s,
                     derive_seed(cfg.seed, pair.id, "summary", k), annotator)
    preview = {
        "pair_id": pair.id,
        "unit": cfg.masking.unit,
        "gamma_a": cfg.masking.gamma_a,
        "gamma_s": cfg.masking.gamma_s,
        "sample_index": k,
        "masked_article": art.text,
        "masked_summary": summ.text,
        "inputs": {
            "mfma": build_input("mfma", masked_summary=summ, masked_article=art),
            "msm": build_input("msm", masked_article=art),
            "mf": build_input("mf", masked_summary=summ),
        },
    }
    path = out / "mask_preview.json"
    path.write_text(json.dumps(preview, indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")
    print(f"pair {pair.id} ({art.sentinel_count} article masks, "
          f"{summ.sentinel_count} summary masks)")
    print(f"masked summary: {summ.text}")
    _write_manifest(out, "mask-preview", cfg, {"corpus": cfg.corpus.path}, [path])


def _cmd_train_infiller(args, cfg) -> None:
    out = _out_dir(args)
    pairs = _corpus_pairs(cfg)
    split = split_half(pairs, cfg.seed)
    annotator = get_annotator(cfg.masking.annotator)
    examples = make_training_examples(split, cfg.infiller.method, cfg.masking.gamma_a,
                                      cfg.masking.gamma_s, cfg.masking.unit,
                                      cfg.seed, annotator)
    backend = get_backend(cfg.infiller.backend)
    tc = TrainConfig(epochs=cfg.infiller.epochs, batch=cfg.infiller.batch,
                     max_in=cfg.infiller.max_in, max_tgt=cfg.infiller.max_tgt)
    handle = train_infiller(backend, examples, tc)
    path = out / "infiller_handle.json"
    path.write_text(json.dumps({"backend": backend.name, "handle": handle},
                               indent=2, sort_keys=True, ensure_ascii=False) + "\n",
                    encoding="utf-8")
    print(f"trained {backend.name} on {len(examples)} examples")
    _write_manifest(out, "train-infiller", cfg, {"corpus": cfg.corpus.path}, [path],
                    {"n_examples": len(examples), "train_config": tc.as_dict()})


def _load_handle(path: str, backend) -> dict:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if raw.get("backend") != backend.name:
        raise ConfigError(f"handle was trained with backend {raw.get('backend')!r}, "
                          f"config says {backend.name!r}")
    return raw["handle"]


def _cmd_generate(args, cfg) -> None:
    out = _out_dir(args)
    pairs = _corpus_pairs(cfg)
    split = split_half(pairs, cfg.seed)
    backend = get_backend(cfg.infiller.backend)
    handle = None
    if args.infiller_handle:
        handle = _load_handle(args.infiller_handle, backend)
    annotator = get_annotator(cfg.masking.annotator)
    negatives = generate_negatives(
        backend, handle, split, cfg.infiller.method, cfg.masking.gamma_a,
        cfg.masking.gamma_s, cfg.masking.unit, cfg.infiller.n_samples, cfg.seed,
        decode=DecodeConfig(beam_size=cfg.infiller.beam_size), annotator=annotator)
    path = out / "negatives.jsonl"
    save_negatives(negatives, path)
    print(f"generated {len(negatives)} negatives over {len(split.gen_half)} pairs "
          f"({cfg.infiller.method}, unit {cfg.masking.unit})")
    _write_manifest(out, "generate", cfg, {"corpus": cfg.corpus.path}, [path],
                    {"n_negatives": len(negatives)})


def _cmd_build_dataset(args, cfg) -> None:
    out = _out_dir(args)
    pairs = _corpus_pairs(cfg)
    split = split_half(pairs, cfg.seed)
    neg_path = Path(args.negatives) if args.negatives else out / "negatives.jsonl"
    negatives = load_negatives(neg_path)
    policy = FilterPolicy(min_edit_distinctness=args.min_edit_distinctness)
    examples = assemble(split, negatives, policy, seed=cfg.seed)
    path = out / "dataset.jsonl"
    save_dataset(examples, path)
    stats = dataset_stats(examples)
    if args.purge_generated:
        neg_path.unlink()
        print(f"purged {neg_path}")
    print(f"assembled {stats['total']} examples "
          f"({stats['by_label']} by label)")
    _write_manifest(out, "build-dataset", cfg,
                    {"corpus": cfg.corpus.path, "negatives": str(neg_path)},
                    [path], {"stats": stats, "purged": bool(args.purge_generated)})


def _cmd_train_classifier(args, cfg) -> None:
    out = _out_dir(args)
    ds_path = Path(args.dataset) if args.dataset else out / "dataset.jsonl"
    dataset = load_dataset(ds_path)
    backend = cls_mod.get_classifier_backend(cfg.classifier.backend)
    cc = cls_mod.ClassifierTrainConfig(epochs=cfg.classifier.epochs,
                                       lr=cfg.classifier.lr,
                                       batch=cfg.classifier.batch)
    handle = cls_mod.train_classifier(backend, dataset, cc)
    ckpt = cls_mod.save_checkpoint(handle, out / "checkpoint",
                                   dataset_hash=dataset_fingerprint(dataset))
    print(f"trained {backend.name} on {len(dataset)} examples -> {ckpt}")
    _write_manifest(out, "train-classifier", cfg, {"dataset": str(ds_path)},
                    [ckpt / "model.json", ckpt / "manifest.json"],
                    {"n_examples": len(dataset)})


def _cmd_evaluate(args, cfg) -> None:
    out = _out_dir(args)
    ckpt_dir = Path(args.checkpoint) if args.checkpoint else out / "checkpoint"
    handle = cls_mod.load_checkpoint(ckpt_dir)
    if not cfg.evaluation.benchmark:
        raise ConfigError("no benchmark configured ([evaluation] benchmark or --benchmark)")
    records = load_benchmark(cfg.evaluation.benchmark, cfg.evaluation.schema)
    rule = harness.rule_for_schema(cfg.evaluation.schema)
    records = harness.binarize_all(records, rule)
    fp = config_mod.fingerprint(cfg)

    report = harness.evaluate_classification(
        handle, records, cfg.classifier.threshold,
        benchmark_id=cfg.evaluation.schema, config_fingerprint=fp)
    payload = {"classification": report.as_dict(), "correlation": None}
    try:
        corr = harness.evaluate_correlation(handle, records,
                                            benchmark_id=cfg.evaluation.schema,
                                            config_fingerprint=fp)
        payload["correlation"] = corr.as_dict()
    except DataError as e:
        print(f"correlation skipped: {e}")

    pred_path = out / "predictions.jsonl"
    cls_mod.save_predictions(harness.predict_records(handle, records,
                                                     cfg.classifier.threshold),
                             pred_path)
    report_path = out / "evaluation_report.json"
    report_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                           encoding="utf-8")
    print(f"{cfg.evaluation.schema}: macro_f1 {report.macro_f1:.4f}, "
          f"ba {report.balanced_accuracy:.4f} over {report.n} records")
    _write_manifest(out, "evaluate", cfg,
                    {"checkpoint": str(ckpt_dir), "benchmark": cfg.evaluation.benchmark},
                    [report_path, pred_path])


def _cmd_sweep(args, cfg) -> None:
    out = _out_dir(args)
    pairs = _corpus_pairs(cfg)
    if not cfg.evaluation.benchmark:
        raise ConfigError("no benchmark configured ([evaluation] benchmark or --benchmark)")
    records = load_benchmark(cfg.evaluation.benchmark, cfg.evaluation.schema)
    records = harness.binarize_all(records, harness.rule_for_schema(cfg.evaluation.schema))
    grid = harness.SweepGrid(gamma_a_values=cfg.sweep.gamma_a_values,
                             gamma_s_values=cfg.sweep.gamma_s_values,
                             unit=cfg.masking.unit, method=cfg.infiller.method)
    rows = harness.run_sweep(
        grid, pairs, records, seed=cfg.seed,
        backend=get_backend(cfg.infiller.backend),
        scorer=get_scorer(cfg.evaluation.scorer),
        n_samples=cfg.sweep.n_samples,
        threshold=cfg.classifier.threshold,
        policy=FilterPolicy(min_edit_distinctness=cfg.sweep.min_edit_distinctness),
        annotator=get_annotator(cfg.masking.annotator),
        classifier_backend=cls_mod.get_classifier_backend(cfg.classifier.backend))
    csv_path = out / "sweep.csv"
    harness.save_sweep_csv(rows, csv_path)
    report_path = out / "sweep_report.json"
    harness.save_sweep_report(rows, report_path,
                              config_fingerprint=config_mod.fingerprint(cfg))
    failed = [r for r in rows if r.error is not None]
    print(f"swept {len(rows)} cells ({len(failed)} flagged)")
    _write_manifest(out, "sweep", cfg,
                    {"corpus": cfg.corpus.path, "benchmark": cfg.evaluation.benchmark},
                    [csv_path, report_path], {"n_rows": len(rows), "n_flagged": len(failed)})


def _cmd_analyze(args, cfg) -> None:
    out = _out_dir(args)
    csv_path = Path(args.sweep_csv) if args.sweep_csv else out / "sweep.csv"
    rows = harness.load_sweep_csv(csv_path)
    analysis = {}
    for x_field in ("distance", "diversity"):
        (a, b, c), r2 = harness.fit_analysis(rows, x_field)
        analysis[x_field] = {"coefficients": {"a": a, "b": b, "c": c},
                             "r_squared": r2}
        print(f"{x_field}: R^2 = {r2:.4f}")
    path = out / "analysis.json"
    path.write_text(json.dumps(analysis, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    _write_manifest(out, "analyze", cfg, {"sweep_csv": str(csv_path)}, [path])


def _cmd_plot(args, cfg) -> None:
    out = _out_dir(args)
    csv_path = Path(args.sweep_csv) if args.sweep_csv else out / "sweep.csv"
    rows = harness.load_sweep_csv(csv_path)
    outputs = harness.emit_plots(rows, out, stem="sweep")
    for p in outputs:
        print(f"wrote {p}")
    _write_manifest(out, "plot", cfg, {"sweep_csv": str(csv_path)}, outputs)


_COMMANDS = {
    "split": _cmd_split,
    "mask-preview": _cmd_mask_preview,
    "train-infiller": _cmd_train_infiller,
    "generate": _cmd_generate,
    "build-dataset": _cmd_build_dataset,
    "train-classifier": _cmd_train_classifier,
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
    "analyze": _cmd_analyze,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _load_config(args)
        _COMMANDS[args.verb](args, cfg)
        return 0
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"data error: {e}", file=sys.stderr)
        return 2
    except BackendError as e:
        print(f"backend error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
