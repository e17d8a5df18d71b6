"""On-disk formats and loaders for citation sets, annotations, IDF tables, and run configuration.

File formats (all UTF-8, line oriented):
  - citation set: JSON lines, one object per sentence:
        {"id": str, "text": str, "source_doc": str}
    Line order is significant and preserved.
  - factoid annotation: TSV rows ``sentence_id<TAB>factoid_id`` (one row per pair);
    optional companion weight file with TSV rows ``factoid_id<TAB>weight``.
  - nugget spans: TSV rows ``annotator<TAB>sentence_id<TAB>start<TAB>end`` where
    start/end are byte offsets into the UTF-8 encoding of the sentence text and
    must fall on codepoint boundaries.
  - IDF table: TSV rows ``term<TAB>idf``.
  - reference summary: plain text, one summary per file.

Loaders are pure given the file bytes; everything they return is immutable
after construction and safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path


class DataError(ValueError):
    """Base class for input data problems; the CLI maps these to exit code 1."""


class ParseError(DataError):
    """A file could not be parsed (message names the offending line)."""


class ValidationError(DataError):
    """A file parsed but violates an invariant."""


class SourceKind(str, Enum):
    CITATIONS = "citations"
    ABSTRACTS = "abstracts"
    FULL_PAPERS = "full_papers"


@dataclass(frozen=True)
class Sentence:
    """One citing/abstract/paper sentence: the atomic summarization unit.

    ``word_count`` is the whitespace token count of the raw text (what a human
    would count against a summary budget); ``tokens`` are the normalized terms
    produced by the tokenizer and may be shorter.
    """

    id: str
    text: str
    tokens: tuple[str, ...]
    word_count: int
    source_doc: str


@dataclass(frozen=True)
class CitationSet:
    """Ordered sentences about one target paper, from one source kind."""

    target_id: str
    sentences: tuple[Sentence, ...]
    source_kind: SourceKind = SourceKind.CITATIONS

    def __post_init__(self):
        ids = [s.id for s in self.sentences]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate sentence id(s): {', '.join(dup)}")

    @property
    def ids(self) -> list[str]:
        return [s.id for s in self.sentences]

    def __len__(self) -> int:
        return len(self.sentences)

    def sentence(self, sid: str) -> Sentence:
        for s in self.sentences:
            if s.id == sid:
                return s
        raise KeyError(sid)


@dataclass(frozen=True)
class FactoidAnnotation:
    """Which factoids (atomic contributions) each sentence mentions.

    Sentences with no factoids map to an empty set.  ``factoid_weights`` is
    optional priority-derived weighting carried for provenance; tier weights
    used by pyramid scoring come from occurrence counts, not from this map.
    """

    factoid_ids: frozenset[str]
    sentence_factoids: dict[str, frozenset[str]]
    factoid_weights: dict[str, float] | None = None

    def __post_init__(self):
        for sid, facts in self.sentence_factoids.items():
            unknown = facts - self.factoid_ids
            if unknown:
                raise ValidationError(
                    f"sentence {sid} references unknown factoid(s): {sorted(unknown)}"
                )
        if self.factoid_weights is not None:
            unknown = set(self.factoid_weights) - set(self.factoid_ids)
            if unknown:
                raise ValidationError(f"weights for unknown factoid(s): {sorted(unknown)}")
            for fid, w in self.factoid_weights.items():
                if not w > 0:
                    raise ValidationError(f"factoid {fid} has non-positive weight {w}")

    def factoids_of(self, sentence_id: str) -> frozenset[str]:
        return self.sentence_factoids.get(sentence_id, frozenset())


@dataclass(frozen=True)
class NuggetSpanAnnotation:
    """One annotator's nugget phrase spans, keyed by sentence id.

    Spans are half-open byte ranges into the UTF-8 sentence text, normalized so
    that spans on one sentence are sorted and non-overlapping.
    """

    annotator: str
    sentence_spans: dict[str, tuple[tuple[int, int], ...]]

    def spans_of(self, sentence_id: str) -> tuple[tuple[int, int], ...]:
        return self.sentence_spans.get(sentence_id, ())


@dataclass(frozen=True)
class IdfTable:
    """term -> inverse document frequency; unseen terms get ``default_idf``.

    Unseen terms are treated as maximally informative, so loaders set the
    default to the largest observed idf.
    """

    values: dict[str, float]
    default_idf: float = 1.0

    def __post_init__(self):
        for term, v in self.values.items():
            if v < 0:
                raise ValidationError(f"negative idf for term {term!r}: {v}")
        if self.default_idf < 0:
            raise ValidationError(f"negative default idf: {self.default_idf}")

    def idf(self, term: str) -> float:
        return self.values.get(term, self.default_idf)


def uniform_idf() -> IdfTable:
    """Neutral table: every term weighs 1.0, reducing TF-IDF to raw TF."""
    return IdfTable({}, default_idf=1.0)


@dataclass(frozen=True)
class RunConfig:
    """All tunables for a summarization/evaluation run.

    Defaults: LexRank edges need cosine above 0.10, damping 0.85; the
    reinforced walk uses lambda 0.90, alpha 0.25, length-prior beta 0.1.
    """

    lexrank_damping: float = 0.85
    lexrank_edge_threshold: float = 0.10
    divrank_lambda: float = 0.90
    divrank_alpha: float = 0.25
    divrank_beta: float = 0.1
    summary_budget_words: int = 100
    random_seed: int = 0
    random_trials: int = 100
    lowercase: bool = True
    strip_punctuation: bool = True
    stopword_path: str | None = None

    def __post_init__(self):
        for name in ("lexrank_damping", "divrank_lambda", "divrank_alpha"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValidationError(f"{name} must be in (0,1), got {v}")
        if not (0.0 <= self.lexrank_edge_threshold <= 1.0):
            raise ValidationError(
                f"lexrank_edge_threshold must be in [0,1], got {self.lexrank_edge_threshold}"
            )
        if self.summary_budget_words <= 0:
            raise ValidationError(f"summary budget must be positive, got {self.summary_budget_words}")
        if self.random_trials <= 0:
            raise ValidationError(f"random_trials must be positive, got {self.random_trials}")

    def tokenizer_config(self) -> "TokenizerConfig":
        from .lexical import TokenizerConfig

        stopwords: frozenset[str] = frozenset()
        if self.stopword_path is not None:
            stopwords = load_stopwords(self.stopword_path)
        return TokenizerConfig(
            lowercase=self.lowercase,
            strip_punctuation=self.strip_punctuation,
            stopwords=stopwords,
        )


_CONFIG_BOOLS = {"true": True, "false": False, "yes": True, "no": False, "1": True, "0": False}


def load_run_config(path: str | Path, overrides: dict | None = None) -> RunConfig:
    """Parse a ``key = value`` config file; ``overrides`` (CLI flags) win."""
    values: dict = {}
    fieldtypes = {f: RunConfig.__dataclass_fields__[f].type for f in RunConfig.__dataclass_fields__}
    for lineno, raw in enumerate(_read_lines(path), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in fieldtypes:
            raise ValidationError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _coerce_config_value(key, value, path, lineno)
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


def _coerce_config_value(key: str, value: str, path, lineno: int):
    annot = str(RunConfig.__dataclass_fields__[key].type)
    try:
        if "bool" in annot:
            return _CONFIG_BOOLS[value.lower()]
        if "int" in annot:
            return int(value)
        if "float" in annot:
            return float(value)
        return value
    except (KeyError, ValueError):
        raise ParseError(f"{path}:{lineno}: bad value {value!r} for {key}") from None


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One stopword per line; blank lines and # comments ignored."""
    words = set()
    for raw in _read_lines(path):
        w = raw.split("#", 1)[0].strip()
        if w:
            words.add(w.lower())
    return frozenset(words)


def _read_lines(path: str | Path) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def load_citation_set(
    path: str | Path,
    source_kind: SourceKind = SourceKind.CITATIONS,
    tokenizer: "TokenizerConfig | None" = None,
    target_id: str | None = None,
) -> CitationSet:
    """Load a JSON-lines citation set, preserving file order.

    Raises ParseError naming the offending line for malformed JSON, and
    ValidationError for missing fields, duplicate ids, or an empty file.
    """
    from .lexical import TokenizerConfig, tokenize

    cfg = tokenizer or TokenizerConfig()
    path = Path(path)
    sentences: list[Sentence] = []
    for lineno, raw in enumerate(_read_lines(path), start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from None
        if not isinstance(record, dict):
            raise ParseError(f"{path}:{lineno}: expected a JSON object")
        missing = {"id", "text"} - set(record)
        if missing:
            raise ValidationError(f"{path}:{lineno}: missing field(s) {sorted(missing)}")
        text = str(record["text"])
        sentences.append(
            Sentence(
                id=str(record["id"]),
                text=text,
                tokens=tuple(tokenize(text, cfg)),
                word_count=len(text.split()),
                source_doc=str(record.get("source_doc", "")),
            )
        )
    if not sentences:
        raise ValidationError(f"{path}: no sentences")
    return CitationSet(
        target_id=target_id if target_id is not None else path.stem,
        sentences=tuple(sentences),
        source_kind=source_kind,
    )


def save_citation_set(cs: CitationSet, path: str | Path) -> None:
    """Inverse of load_citation_set: JSON lines in sentence order."""
    lines = [
        json.dumps({"id": s.id, "text": s.text, "source_doc": s.source_doc}, ensure_ascii=False)
        for s in cs.sentences
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def retokenized(cs: CitationSet, tokenizer: "TokenizerConfig") -> CitationSet:
    """Same sentences under a different tokenizer config."""
    from .lexical import tokenize

    return replace(
        cs,
        sentences=tuple(replace(s, tokens=tuple(tokenize(s.text, tokenizer))) for s in cs.sentences),
    )


def load_factoid_annotation(
    path: str | Path,
    cs: CitationSet,
    weights_path: str | Path | None = None,
) -> FactoidAnnotation:
    """Load ``sentence_id<TAB>factoid_id`` rows against a citation set.

    Sentences absent from the file get the empty factoid set.  Unknown
    sentence ids are validation errors (referential integrity).
    """
    known = set(cs.ids)
    sentence_factoids: dict[str, set[str]] = {s.id: set() for s in cs.sentences}
    factoid_ids: set[str] = set()
    for lineno, raw in enumerate(_read_lines(path), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        parts = raw.rstrip("\n").split("\t")
        if len(parts) != 2:
            raise ParseError(f"{path}:{lineno}: expected 'sentence_id<TAB>factoid_id'")
        sid, fid = parts[0].strip(), parts[1].strip()
        if sid not in known:
            raise ValidationError(f"{path}:{lineno}: unknown sentence id {sid!r}")
        if not fid:
            raise ParseError(f"{path}:{lineno}: empty factoid id")
        sentence_factoids[sid].add(fid)
        factoid_ids.add(fid)

    weights = None
    if weights_path is not None:
        weights = {}
        for lineno, raw in enumerate(_read_lines(weights_path), start=1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            parts = raw.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise ParseError(f"{weights_path}:{lineno}: expected 'factoid_id<TAB>weight'")
            fid, value = parts[0].strip(), parts[1].strip()
            try:
                weights[fid] = float(value)
            except ValueError:
                raise ParseError(f"{weights_path}:{lineno}: bad weight {value!r}") from None

    return FactoidAnnotation(
        factoid_ids=frozenset(factoid_ids),
        sentence_factoids={sid: frozenset(f) for sid, f in sentence_factoids.items()},
        factoid_weights=weights,
    )


def load_nugget_spans(path: str | Path, cs: CitationSet) -> dict[str, NuggetSpanAnnotation]:
    """Load ``annotator<TAB>sentence_id<TAB>start<TAB>end`` rows, one annotation per annotator.

    Offsets are validated against the UTF-8 byte length of the sentence text
    and must fall on codepoint boundaries; overlapping spans from one
    annotator are merged.
    """
    text_bytes = {s.id: s.text.encode("utf-8") for s in cs.sentences}
    per_annotator: dict[str, dict[str, list[tuple[int, int]]]] = {}
    for lineno, raw in enumerate(_read_lines(path), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        parts = raw.rstrip("\n").split("\t")
        if len(parts) != 4:
            raise ParseError(f"{path}:{lineno}: expected 'annotator<TAB>sentence_id<TAB>start<TAB>end'")
        annotator, sid, start_s, end_s = (p.strip() for p in parts)
        if sid not in text_bytes:
            raise ValidationError(f"{path}:{lineno}: unknown sentence id {sid!r}")
        try:
            start, end = int(start_s), int(end_s)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: offsets must be integers") from None
        data = text_bytes[sid]
        if not (0 <= start < end <= len(data)):
            raise ValidationError(
                f"{path}:{lineno}: span ({start},{end}) out of bounds for sentence {sid!r} "
                f"({len(data)} bytes)"
            )
        for offset in (start, end):
            if not _is_codepoint_boundary(data, offset):
                raise ValidationError(
                    f"{path}:{lineno}: offset {offset} splits a UTF-8 codepoint in sentence {sid!r}"
                )
        per_annotator.setdefault(annotator, {}).setdefault(sid, []).append((start, end))

    return {
        annotator: NuggetSpanAnnotation(
            annotator=annotator,
            sentence_spans={sid: _merge_spans(spans) for sid, spans in by_sentence.items()},
        )
        for annotator, by_sentence in per_annotator.items()
    }


def _is_codepoint_boundary(data: bytes, offset: int) -> bool:
    # UTF-8 continuation bytes match 0b10xxxxxx.
    return offset == 0 or offset == len(data) or (data[offset] & 0xC0) != 0x80


def _merge_spans(spans: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    merged: list[tuple[int, int]] = []
    for start, end in sorted(spans):
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return tuple(merged)


def load_idf_table(path: str | Path) -> IdfTable:
    """Load ``term<TAB>idf`` rows; unseen terms default to the max observed idf."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(_read_lines(path), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        parts = raw.rstrip("\n").split("\t")
        if len(parts) != 2:
            raise ParseError(f"{path}:{lineno}: expected 'term<TAB>idf'")
        term, value_s = parts[0], parts[1].strip()
        try:
            value = float(value_s)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: bad idf value {value_s!r}") from None
        if value < 0:
            raise ValidationError(f"{path}:{lineno}: negative idf {value} for term {term!r}")
        values[term] = value
    if not values:
        raise ValidationError(f"{path}: empty idf table")
    return IdfTable(values=values, default_idf=max(values.values()))


def load_reference_summary(path: str | Path) -> str:
    """Plain-text reference summary; the whole file is one summary."""
    text = Path(path).read_text(encoding="utf-8").strip()
    if not text:
        raise ValidationError(f"{path}: empty reference summary")
    return text
