"""Shared data model, the line-record corpus format and LID dataset assembly.

Corpus files hold one JSON object per line (UTF-8, LF).  Keys appear in the
fixed order ``id, text, source, topic, title, date, language``; absent
optional fields are omitted.  JSON string escaping keeps newlines inside
``text`` on a single physical line.  Dataset split files use the same
framing with the keys ``text, label``.
"""

from __future__ import annotations

import datetime as _dt
import enum
import io
import json
import math
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Mapping, Sequence

from .errors import (
    CorpusWriteError,
    InsufficientData,
    LabelError,
    MalformedRecord,
)
from .rng import make_rng


class LanguageCode(str, enum.Enum):
    KMR = "kmr"
    CKB = "ckb"
    SDH = "sdh"
    HAC = "hac"
    ZZA = "zza"
    LKI = "lki"
    AR = "ar"
    FA = "fa"
    TR = "tr"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, value: str) -> "LanguageCode":
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise LabelError(f"unknown language code {value!r}") from None


class ScriptCode(str, enum.Enum):
    ARAB = "arab"  # Central Kurdish Perso-Arabic
    ARAB_FA = "arab-fa"  # Persian orthography
    LATN = "latn"  # Hawar / Bedirxan
    LATN_WIKI = "latn-wiki"  # Turkish-influenced Latin of the Zazaki Wikipedia
    UNKNOWN = "unknown"  # detection result only

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, value: str) -> "ScriptCode":
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise LabelError(f"unknown script code {value!r}") from None


# Longest codes first so that concatenated labels split unambiguously.
_LANGS_BY_LENGTH = sorted(LanguageCode, key=lambda c: -len(c.value))
_SCRIPTS_COMPACT = {
    s.value.replace("-", ""): s for s in ScriptCode if s is not ScriptCode.UNKNOWN
}


@dataclass(frozen=True, order=True)
class Label:
    """A language code with an optional script code, e.g. ``ckb-arab``."""

    language: LanguageCode
    script: ScriptCode | None = None

    def __post_init__(self):
        if not isinstance(self.language, LanguageCode):
            object.__setattr__(self, "language", LanguageCode.parse(self.language))
        if self.script is not None and not isinstance(self.script, ScriptCode):
            object.__setattr__(self, "script", ScriptCode.parse(self.script))
        if self.script is ScriptCode.UNKNOWN:
            raise LabelError("'unknown' is a detection result, not a label script")

    def __str__(self):
        return self.serialize()

    def serialize(self) -> str:
        if self.script is None:
            return self.language.value
        return f"{self.language.value}-{self.script.value}"

    @classmethod
    def parse(cls, value: str) -> "Label":
        """Parse ``lang``, ``lang-script`` or the concatenated ``langscript`` form."""
        if not isinstance(value, str):
            raise LabelError(f"label must be a string, got {type(value).__name__}")
        text = value.strip().lower()
        if not text:
            raise LabelError("empty label")
        if "-" in text:
            lang, _, script = text.partition("-")
            return cls(LanguageCode.parse(lang), ScriptCode.parse(script))
        for code in _LANGS_BY_LENGTH:
            if text == code.value:
                return cls(code)
            if text.startswith(code.value):
                script = _SCRIPTS_COMPACT.get(text[len(code.value):])
                if script is not None:
                    return cls(code, script)
        raise LabelError(f"cannot parse label {value!r}")

    def sort_key(self) -> str:
        return self.serialize()


def _check_utf8(value: str, what: str) -> None:
    try:
        value.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise ValueError(f"{what} is not valid UTF-8: {exc.reason}") from None


def _check_date(value: str) -> None:
    text = value[:-1] + "+00:00" if value.endswith("Z") else value
    for parse in (_dt.date.fromisoformat, _dt.datetime.fromisoformat):
        try:
            parse(text)
            return
        except ValueError:
            continue
    raise ValueError(f"date {value!r} is not ISO-8601")


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    source: str
    topic: str | None = None
    title: str | None = None
    date: str | None = None
    language: Label | None = None

    def __post_init__(self):
        for name in ("id", "text", "source"):
            value = getattr(self, name)
            if not isinstance(value, str):
                raise ValueError(f"{name} must be a string")
            _check_utf8(value, name)
        if not self.id:
            raise ValueError("id must be non-empty")
        for name in ("topic", "title", "date"):
            value = getattr(self, name)
            if value is not None:
                if not isinstance(value, str):
                    raise ValueError(f"{name} must be a string")
                _check_utf8(value, name)
        if self.date is not None:
            _check_date(self.date)
        if self.language is not None and not isinstance(self.language, Label):
            object.__setattr__(self, "language", Label.parse(self.language))

    def to_record(self) -> dict:
        record = {"id": self.id, "text": self.text, "source": self.source}
        for name in ("topic", "title", "date"):
            value = getattr(self, name)
            if value is not None:
                record[name] = value
        if self.language is not None:
            record["language"] = self.language.serialize()
        return record


@dataclass(frozen=True)
class LabeledSentence:
    text: str
    label: Label

    def __post_init__(self):
        if not isinstance(self.text, str) or not self.text.strip():
            raise ValueError("sentence text must be non-empty")
        _check_utf8(self.text, "text")
        if not isinstance(self.label, Label):
            object.__setattr__(self, "label", Label.parse(self.label))

    def to_record(self) -> dict:
        return {"text": self.text, "label": self.label.serialize()}


# --------------------------------------------------------------------------
# line-record framing

_DOC_KEYS = ("id", "text", "source", "topic", "title", "date", "language")
_DATASET_KEYS = ("text", "label")


def encode_record(record: Mapping) -> str:
    return json.dumps(record, ensure_ascii=False) + "\n"


def _write_line(sink, line: str) -> None:
    if isinstance(sink, (io.RawIOBase, io.BufferedIOBase)) or "b" in getattr(
        sink, "mode", ""
    ):
        sink.write(line.encode("utf-8"))
    else:
        sink.write(line)


def _write_records(records: Iterable[dict], sink) -> int:
    count = 0
    for index, record in enumerate(records):
        try:
            _write_line(sink, encode_record(record))
        except OSError as exc:
            raise CorpusWriteError(index, exc) from exc
        count += 1
    return count


def _iter_lines(source: IO) -> Iterator[tuple[int, str | bytes]]:
    for lineno, raw in enumerate(source, start=1):
        yield lineno, raw


def _decode_line(lineno: int, raw, path) -> str | None:
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise MalformedRecord(lineno, "invalid UTF-8 bytes", path) from None
    line = raw.rstrip("\n").rstrip("\r")
    if not line.strip():
        return None
    return line


def _parse_object(lineno: int, line: str, allowed, path) -> dict:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(lineno, f"invalid JSON: {exc.msg}", path) from None
    if not isinstance(obj, dict):
        raise MalformedRecord(lineno, "record is not a JSON object", path)
    extra = set(obj) - set(allowed)
    if extra:
        raise MalformedRecord(lineno, f"unexpected keys {sorted(extra)}", path)
    return obj


def _document_from_record(lineno: int, obj: dict, path) -> Document:
    for key in ("id", "text", "source"):
        if key not in obj:
            raise MalformedRecord(lineno, f"missing key {key!r}", path)
    try:
        return Document(**obj)
    except (ValueError, TypeError) as exc:
        raise MalformedRecord(lineno, str(exc), path) from None


def write_corpus(documents: Iterable[Document], sink) -> int:
    """Write documents as line records; returns the number written."""
    return _write_records((doc.to_record() for doc in documents), sink)


def iter_corpus(source, *, errors: list | None = None, path=None) -> Iterator[Document]:
    """Stream documents from a corpus file.

    With ``errors`` set to a list, malformed lines are appended to it and
    skipped instead of raising.
    """
    seen = set()
    for lineno, raw in _iter_lines(source):
        try:
            line = _decode_line(lineno, raw, path)
            if line is None:
                continue
            obj = _parse_object(lineno, line, _DOC_KEYS, path)
            doc = _document_from_record(lineno, obj, path)
            if doc.id in seen:
                raise MalformedRecord(lineno, f"duplicate id {doc.id!r}", path)
            seen.add(doc.id)
        except MalformedRecord as exc:
            if errors is None:
                raise
            errors.append(exc)
            continue
        yield doc


def read_corpus(source, path=None) -> list[Document]:
    return list(iter_corpus(source, path=path))


def read_corpus_lenient(source, path=None) -> tuple[list[Document], list[MalformedRecord]]:
    errors: list[MalformedRecord] = []
    docs = list(iter_corpus(source, errors=errors, path=path))
    return docs, errors


def write_dataset(sentences: Iterable[LabeledSentence], sink) -> int:
    return _write_records((s.to_record() for s in sentences), sink)


def iter_dataset(source, path=None) -> Iterator[LabeledSentence]:
    for lineno, raw in _iter_lines(source):
        line = _decode_line(lineno, raw, path)
        if line is None:
            continue
        obj = _parse_object(lineno, line, _DATASET_KEYS, path)
        if "text" not in obj or "label" not in obj:
            raise MalformedRecord(lineno, "dataset record needs text and label", path)
        try:
            yield LabeledSentence(obj["text"], Label.parse(obj["label"]))
        except (ValueError, TypeError) as exc:
            raise MalformedRecord(lineno, str(exc), path) from None


def read_dataset(source, path=None) -> list[LabeledSentence]:
    return list(iter_dataset(source, path=path))


# --------------------------------------------------------------------------
# dataset assembly

def _test_size(n: int, fraction: float) -> int:
    return max(1, int(math.floor(n * fraction + 0.5)))


def build_lid_dataset(
    corpora: Mapping[Label, Sequence[str]],
    n_per_label: int,
    test_fraction: float = 0.2,
    seed: int = 1,
) -> tuple[list[LabeledSentence], list[LabeledSentence]]:
    """Sample ``n_per_label`` sentences per label and split them train/test.

    Blank lines are discarded and duplicate sentences within a label are
    collapsed before sampling, so the two splits never share a sentence.
    Labels are processed in sorted order from a single Philox stream; the
    result depends only on the arguments.
    """
    if n_per_label < 1:
        raise ValueError("n_per_label must be >= 1")
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must lie strictly between 0 and 1")
    rng = make_rng(seed)
    train: list[LabeledSentence] = []
    test: list[LabeledSentence] = []
    for label in sorted(corpora, key=lambda lab: lab.serialize()):
        pool = list(dict.fromkeys(s.strip() for s in corpora[label] if s.strip()))
        if len(pool) < n_per_label:
            raise InsufficientData(label, len(pool), n_per_label)
        picked = rng.permutation(len(pool))[:n_per_label]
        n_test = _test_size(n_per_label, test_fraction)
        test.extend(LabeledSentence(pool[i], label) for i in picked[:n_test])
        train.extend(LabeledSentence(pool[i], label) for i in picked[n_test:])
    return train, test
