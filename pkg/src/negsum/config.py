"""Structured run configuration: one TOML file, six sections, strict keys.

Every CLI verb reads the same config shape and derives all randomness
from the single top-level seed. Unknown sections or keys are errors, not
warnings, so a typo cannot silently fall back to a default. The config
fingerprint is a sha256 over the canonical JSON form and lands in every
report and manifest.
"""

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .corpus import BENCHMARK_SCHEMAS, CORPUS_FORMATS
from .errors import ConfigError, DataError
from .masker import METHODS
from .spanner import UNITS


@dataclass(frozen=True)
class CorpusSection:
    path: str = ""
    format: str = "jsonl-pairs"


@dataclass(frozen=True)
class MaskingSection:
    unit: str = "np_ent"
    gamma_a: float = 0.6
    gamma_s: float = 0.8
    annotator: str = "rule"


@dataclass(frozen=True)
class InfillerSection:
    backend: str = "mock"
    method: str = "mfma"
    n_samples: int = 1
    epochs: int = 5
    batch: int = 48
    max_in: int = 1024
    max_tgt: int = 140
    beam_size: int = 4


@dataclass(frozen=True)
class ClassifierSection:
    backend: str = "overlap-mock"
    epochs: int = 5
    lr: float = 2e-5
    batch: int = 96
    threshold: float = 0.5


@dataclass(frozen=True)
class EvaluationSection:
    benchmark: str = ""
    schema: str = "factcc-test"
    scorer: str = "token-overlap"


@dataclass(frozen=True)
class SweepSection:
    gamma_a_values: tuple = (0.2, 0.4, 0.6, 0.8, 1.0)
    gamma_s_values: tuple = (0.2, 0.4, 0.6, 0.8, 1.0)
    n_samples: int = 4
    min_edit_distinctness: float = 0.0


@dataclass(frozen=True)
class Config:
    seed: int = 0
    corpus: CorpusSection = field(default_factory=CorpusSection)
    masking: MaskingSection = field(default_factory=MaskingSection)
    infiller: InfillerSection = field(default_factory=InfillerSection)
    classifier: ClassifierSection = field(default_factory=ClassifierSection)
    evaluation: EvaluationSection = field(default_factory=EvaluationSection)
    sweep: SweepSection = field(default_factory=SweepSection)


_SECTIONS = {
    "corpus": CorpusSection,
    "masking": MaskingSection,
    "infiller": InfillerSection,
    "classifier": ClassifierSection,
    "evaluation": EvaluationSection,
    "sweep": SweepSection,
}


def _coerce(section: str, f: dataclasses.Field, value):
    if f.type is float or f.type == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"[{section}] {f.name} must be a number, got {value!r}")
        return float(value)
    if f.type is int or f.type == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"[{section}] {f.name} must be an integer, got {value!r}")
        return value
    if f.type is str or f.type == "str":
        if not isinstance(value, str):
            raise ConfigError(f"[{section}] {f.name} must be a string, got {value!r}")
        return value
    # remaining fields are gamma value lists
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"[{section}] {f.name} must be a non-empty list of numbers")
    out = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"[{section}] {f.name} entries must be numbers, got {v!r}")
        out.append(float(v))
    return tuple(out)


def _build_section(name: str, raw: dict):
    cls = _SECTIONS[name]
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in raw.items():
        if key not in fields:
            raise ConfigError(
                f"unknown key {key!r} in section [{name}] "
                f"(expected one of {sorted(fields)})")
        kwargs[key] = _coerce(name, fields[key], value)
    return cls(**kwargs)


def validate_config(cfg: Config) -> Config:
    if cfg.corpus.format not in CORPUS_FORMATS:
        raise ConfigError(f"[corpus] unknown format: {cfg.corpus.format!r}")
    if cfg.masking.unit not in UNITS:
        raise ConfigError(f"[masking] unknown unit: {cfg.masking.unit!r}")
    for name, g in (("gamma_a", cfg.masking.gamma_a), ("gamma_s", cfg.masking.gamma_s)):
        if not 0.0 <= g <= 1.0:
            raise ConfigError(f"[masking] {name} must be in [0, 1], got {g}")
    if cfg.infiller.method not in METHODS:
        raise ConfigError(f"[infiller] unknown method: {cfg.infiller.method!r}")
    if cfg.infiller.n_samples < 1:
        raise ConfigError(f"[infiller] n_samples must be >= 1, got {cfg.infiller.n_samples}")
    if not 0.0 <= cfg.classifier.threshold <= 1.0:
        raise ConfigError(
            f"[classifier] threshold must be in [0, 1], got {cfg.classifier.threshold}")
    if cfg.evaluation.schema not in BENCHMARK_SCHEMAS:
        raise ConfigError(f"[evaluation] unknown schema: {cfg.evaluation.schema!r}")
    for name, vals in (("gamma_a_values", cfg.sweep.gamma_a_values),
                       ("gamma_s_values", cfg.sweep.gamma_s_values)):
        for g in vals:
            if not 0.0 <= g <= 1.0:
                raise ConfigError(f"[sweep] {name} entry out of [0, 1]: {g}")
    if not 0.0 <= cfg.sweep.min_edit_distinctness <= 1.0:
        raise ConfigError("[sweep] min_edit_distinctness must be in [0, 1]")
    return cfg


def default_config() -> Config:
    return Config()


def load_config(path) -> Config:
    """Parse and validate a TOML config file."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"config file does not exist: {path}")
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid TOML in {path}: {e}") from e

    seed = raw.pop("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    sections = {}
    for name, body in raw.items():
        if name not in _SECTIONS:
            raise ConfigError(
                f"unknown config section [{name}] (expected one of {sorted(_SECTIONS)})")
        if not isinstance(body, dict):
            raise ConfigError(f"top-level key {name!r} must be a section")
        sections[name] = _build_section(name, body)
    return validate_config(Config(seed=seed, **sections))


def config_to_dict(cfg: Config) -> dict:
    d = dataclasses.asdict(cfg)
    d["sweep"]["gamma_a_values"] = list(d["sweep"]["gamma_a_values"])
    d["sweep"]["gamma_s_values"] = list(d["sweep"]["gamma_s_values"])
    return d


def fingerprint(cfg: Config) -> str:
    """sha256 over the canonical JSON form; any field change changes it."""
    canonical = json.dumps(config_to_dict(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
