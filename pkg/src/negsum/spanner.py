"""Maskable-span extraction at three linguistic units: np_ent, token, sentence.

Annotators live behind a small plugin registry. The default "rule"
annotator is deterministic and dependency-free: entities are runs of
capitalized or numeric tokens, noun phrases are determiner-led chunks.
A "spacy" annotator can be registered on installs that have the model;
it is optional and never imported unless requested.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass

from .errors import ConfigError, DataError

UNITS = ("np_ent", "token", "sentence")

_TOKEN = re.compile(r"\S+")
_SENT_BOUNDARY = re.compile(r"[.!?]+[\"')\]]*\s+")

DETERMINERS = {
    "the", "a", "an", "this", "that", "these", "those",
    "his", "her", "its", "their", "our", "my", "your",
}
# words that terminate a determiner-led chunk (no POS tagger here, so a
# short function-word list stands in for "not part of the noun phrase")
CHUNK_STOPS = {
    "is", "are", "was", "were", "be", "been", "being", "am",
    "has", "have", "had", "having", "will", "would", "shall", "should",
    "can", "could", "may", "might", "must", "do", "does", "did", "done",
    "to", "in", "on", "at", "by", "for", "with", "from", "as", "into",
    "over", "under", "about", "after", "before", "between", "during",
    "but", "or", "nor", "so", "yet", "if", "when", "while", "because",
    "than", "then", "there", "here", "not", "no", "who", "which", "whose",
    "where", "what", "how", "why", "said", "says", "say",
    "he", "she", "it", "they", "them", "him", "we", "us", "i", "you",
}
CONNECTORS = {"and", "of"}
MAX_CHUNK_TOKENS = 7


@dataclass(frozen=True)
class Span:
    """A character-offset region of text tagged with its extraction unit."""

    start: int
    end: int
    unit: str
    surface: str

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad span offsets: [{self.start}, {self.end})")
        if self.unit not in UNITS:
            raise ValueError(f"bad span unit: {self.unit!r}")


def _span(text: str, start: int, end: int, unit: str) -> Span:
    return Span(start=start, end=end, unit=unit, surface=text[start:end])


class RuleAnnotator:
    """Deterministic heuristic annotator; supports every unit."""

    name = "rule"
    units = frozenset(UNITS)
    reentrant = True

    def tokens(self, text: str) -> list[Span]:
        return [_span(text, m.start(), m.end(), "token") for m in _TOKEN.finditer(text)]

    def sentences(self, text: str) -> list[Span]:
        spans = []
        start = 0
        for m in _SENT_BOUNDARY.finditer(text):
            spans.extend(self._trimmed(text, start, m.end(), "sentence"))
            start = m.end()
        spans.extend(self._trimmed(text, start, len(text), "sentence"))
        return spans

    @staticmethod
    def _trimmed(text: str, start: int, end: int, unit: str) -> list[Span]:
        chunk = text[start:end]
        lead = len(chunk) - len(chunk.lstrip())
        trail = len(chunk) - len(chunk.rstrip())
        if start + lead >= end - trail:
            return []
        return [_span(text, start + lead, end - trail, unit)]

    def entities(self, text: str) -> list[Span]:
        """Runs of capitalized or numeric tokens, 'of' allowed inside a run."""
        toks = [(m.start(), m.end(), m.group()) for m in _TOKEN.finditer(text)]
        spans = []
        i = 0
        while i < len(toks):
            if not _entity_token(toks[i][2]):
                i += 1
                continue
            j = i
            while j + 1 < len(toks):
                nxt = toks[j + 1][2]
                if _entity_token(nxt) and not _ends_clause(toks[j][2]):
                    j += 1
                elif (_core(nxt) == "of" and j + 2 < len(toks)
                      and _entity_token(toks[j + 2][2]) and not _ends_clause(toks[j][2])):
                    j += 2
                else:
                    break
            spans.append(self._core_span(text, toks[i][0], toks[j], "np_ent"))
            i = j + 1
        return [s for s in spans if s is not None]

    def noun_phrases(self, text: str) -> list[Span]:
        """Determiner-led chunks, up to MAX_CHUNK_TOKENS tokens."""
        toks = [(m.start(), m.end(), m.group()) for m in _TOKEN.finditer(text)]
        spans = []
        i = 0
        while i < len(toks):
            if _core(toks[i][2]) not in DETERMINERS:
                i += 1
                continue
            j = i
            while j + 1 < len(toks) and j - i + 1 < MAX_CHUNK_TOKENS:
                if _ends_clause(toks[j][2]):
                    break
                nxt = _core(toks[j + 1][2])
                if not nxt or nxt in CHUNK_STOPS:
                    break
                # determiners continue a chunk only right after a connector
                if nxt in DETERMINERS and _core(toks[j][2]) not in CONNECTORS:
                    break
                j += 1
            # a bare determiner with nothing attached is not a phrase
            while j > i and _core(toks[j][2]) in CONNECTORS | DETERMINERS:
                j -= 1
            if j > i:
                span = self._core_span(text, toks[i][0], toks[j], "np_ent")
                if span is not None:
                    spans.append(span)
            i = j + 1
        return spans

    @staticmethod
    def _core_span(text: str, start: int, last_tok: tuple, unit: str) -> Span | None:
        end = last_tok[1]
        while end > start and text[end - 1] in string.punctuation:
            end -= 1
        while start < end and text[start] in string.punctuation:
            start += 1
        if end <= start:
            return None
        return _span(text, start, end, unit)


def _core(token: str) -> str:
    return token.strip(string.punctuation).lower()


def _entity_token(token: str) -> bool:
    core = token.strip(string.punctuation)
    if not core:
        return False
    return core[0].isupper() or any(c.isdigit() for c in core)


def _ends_clause(token: str) -> bool:
    return token[-1] in ",.;:!?\"')"


class SpacyAnnotator:
    """Wraps a spaCy pipeline; optional, loaded only on request."""

    name = "spacy"
    units = frozenset(UNITS)
    reentrant = False

    def __init__(self, model: str = "en_core_web_sm"):
        try:
            import spacy
        except ImportError as e:
            raise ConfigError(
                "annotator 'spacy' requires the spacy package "
                "(pip install spacy && python -m spacy download en_core_web_sm)") from e
        self._nlp = spacy.load(model)

    def tokens(self, text: str) -> list[Span]:
        doc = self._nlp(text)
        return [_span(text, t.idx, t.idx + len(t.text), "token")
                for t in doc if not t.is_space]

    def sentences(self, text: str) -> list[Span]:
        doc = self._nlp(text)
        out = []
        for s in doc.sents:
            stripped = s.text.strip()
            if stripped:
                start = s.start_char + (len(s.text) - len(s.text.lstrip()))
                out.append(_span(text, start, start + len(stripped), "sentence"))
        return out

    def entities(self, text: str) -> list[Span]:
        doc = self._nlp(text)
        return [_span(text, e.start_char, e.end_char, "np_ent") for e in doc.ents]

    def noun_phrases(self, text: str) -> list[Span]:
        doc = self._nlp(text)
        return [_span(text, c.start_char, c.end_char, "np_ent") for c in doc.noun_chunks]


ANNOTATORS = {
    "rule": RuleAnnotator,
    "spacy": SpacyAnnotator,
}


def get_annotator(name: str = "rule"):
    """Instantiate a registered annotator by name."""
    if name not in ANNOTATORS:
        raise ConfigError(f"unknown annotator: {name!r} (expected one of {sorted(ANNOTATORS)})")
    return ANNOTATORS[name]()


def register_annotator(name: str, factory) -> None:
    ANNOTATORS[name] = factory


def merge_overlaps(spans: list[Span]) -> list[Span]:
    """Merge overlapping spans into covering spans; input must be sorted.

    Character coverage is preserved exactly; abutting spans stay separate.
    The merged surface is recovered from offsets, so all inputs must come
    from the same text.
    """
    for a, b in zip(spans, spans[1:]):
        if b.start < a.start:
            raise ValueError("merge_overlaps requires spans sorted by start")
    out: list[Span] = []
    for s in spans:
        if out and s.start < out[-1].end:
            prev = out[-1]
            if s.end > prev.end:
                grown = prev.surface + s.surface[prev.end - s.start:]
                out[-1] = Span(prev.start, s.end, prev.unit, grown)
        else:
            out.append(s)
    return out


def extract_spans(text: str, unit: str, annotator=None) -> list[Span]:
    """Extract sorted, non-overlapping maskable spans of ``unit`` from text.

    np_ent is the overlap-merged union of the annotator's noun-phrase and
    entity mentions; token and sentence pass through the annotator's
    segmentation directly.
    """
    if not text:
        raise DataError("cannot extract spans from empty text")
    if unit not in UNITS:
        raise ConfigError(f"unknown unit: {unit!r} (expected one of {UNITS})")
    if annotator is None:
        annotator = get_annotator("rule")
    if unit not in annotator.units:
        raise ConfigError(f"annotator {annotator.name!r} does not support unit {unit!r}")

    if unit == "token":
        return annotator.tokens(text)
    if unit == "sentence":
        return annotator.sentences(text)
    mentions = annotator.noun_phrases(text) + annotator.entities(text)
    mentions.sort(key=lambda s: (s.start, s.end))
    return merge_overlaps(mentions)
