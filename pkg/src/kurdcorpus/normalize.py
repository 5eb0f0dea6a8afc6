"""Character-encoding unification, text cleaning and code-switch flagging.

Normalization tables are data files (see ``data/*.tsv``), one mapping per
line::

    <source hex codepoints> TAB <target hex codepoints> TAB <comment>

An empty target deletes the source.  A source may carry the anchors ``^``
(must start a word) and/or ``$`` (must end a word); a word character is a
letter, a combining mark or ZWNJ.  Tables are applied in a single
left-to-right pass with longest-match-first selection.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

import regex

from .errors import ConfigError, TableError

ZWNJ = "\u200c"
_WORD_CLASS = r"[\p{L}\p{M}\u200c]"


def _is_word_char(ch: str) -> bool:
    return ch == ZWNJ or unicodedata.category(ch)[0] in "LM"


class TableMode(str, enum.Enum):
    ENCODING_UNIFICATION = "encoding-unification"
    KURDISH_HARMONIZATION = "kurdish-harmonization"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TableEntry:
    source: str
    target: str
    word_start: bool = False
    word_end: bool = False
    comment: str = ""

    def pattern(self) -> str:
        body = regex.escape(self.source)
        if self.word_start:
            body = f"(?<!{_WORD_CLASS})" + body
        if self.word_end:
            body = body + f"(?!{_WORD_CLASS})"
        return body


def _check_entries(entries: Iterable[TableEntry]) -> None:
    entries = list(entries)
    for entry in entries:
        if not entry.source:
            raise TableError("empty source sequence")
    for a in entries:
        for b in entries:
            if a is b:
                continue
            if a.source == b.source:
                raise TableError(f"duplicate source {_hex(a.source)}")
            if b.source.startswith(a.source):
                # a word-end anchored entry cannot fire where b continues with a word character
                if a.word_end and _is_word_char(b.source[len(a.source)]):
                    continue
                raise TableError(f"source {_hex(a.source)} is a prefix of {_hex(b.source)}")
    for a in entries:
        for b in entries:
            if b.source in a.target:
                raise TableError(
                    f"target of {_hex(a.source)} contains source {_hex(b.source)}; "
                    "table would not be idempotent"
                )


def _hex(text: str) -> str:
    return " ".join(f"{ord(c):04X}" for c in text) or "(empty)"


class NormalizationTable:
    """An immutable, validated set of character-sequence rewrites."""

    def __init__(self, entries: Iterable[TableEntry], mode: TableMode | str):
        self.entries: tuple[TableEntry, ...] = tuple(entries)
        self.mode = TableMode(mode)
        _check_entries(self.entries)
        self._targets = {e.source: e.target for e in self.entries}
        ordered = sorted(self.entries, key=lambda e: -len(e.source))
        if ordered:
            self._regex = regex.compile("|".join(e.pattern() for e in ordered))
        else:
            self._regex = None

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return f"NormalizationTable(mode={self.mode.value!r}, entries={len(self.entries)})"

    def apply(self, text: str) -> str:
        if self._regex is None:
            return text
        return self._regex.sub(lambda m: self._targets[m.group(0)], text)

    @property
    def sources(self) -> frozenset[str]:
        return frozenset(self._targets)

    @classmethod
    def parse(cls, text: str, mode: TableMode | str) -> "NormalizationTable":
        entries = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise TableError(f"line {lineno}: expected source TAB target")
            entries.append(_parse_entry(lineno, parts[0], parts[1], "\t".join(parts[2:])))
        return cls(entries, mode)

    @classmethod
    def load(cls, path: str | Path, mode: TableMode | str) -> "NormalizationTable":
        return cls.parse(Path(path).read_text(encoding="utf-8"), mode)

    def dumps(self) -> str:
        lines = [f"# mode: {self.mode.value}"]
        for e in self.entries:
            src = ("^ " if e.word_start else "") + _hex(e.source) + (" $" if e.word_end else "")
            tgt = " ".join(f"{ord(c):04X}" for c in e.target)
            lines.append(f"{src}\t{tgt}\t{e.comment}")
        return "\n".join(lines) + "\n"


def _parse_codepoints(lineno: int, field_text: str) -> str:
    chars = []
    for token in field_text.split():
        try:
            cp = int(token, 16)
            chars.append(chr(cp))
        except ValueError:
            raise TableError(f"line {lineno}: bad codepoint {token!r}") from None
        if 0xD800 <= cp <= 0xDFFF:
            raise TableError(f"line {lineno}: surrogate codepoint {token}")
    return "".join(chars)


def _parse_entry(lineno: int, src_field: str, tgt_field: str, comment: str) -> TableEntry:
    tokens = src_field.split()
    word_start = bool(tokens) and tokens[0] == "^"
    if word_start:
        tokens = tokens[1:]
    word_end = bool(tokens) and tokens[-1] == "$"
    if word_end:
        tokens = tokens[:-1]
    source = _parse_codepoints(lineno, " ".join(tokens))
    if not source:
        raise TableError(f"line {lineno}: empty source")
    return TableEntry(source, _parse_codepoints(lineno, tgt_field), word_start, word_end, comment.strip())


_SHIPPED = {
    TableMode.ENCODING_UNIFICATION: "encoding_unification.tsv",
    TableMode.KURDISH_HARMONIZATION: "kurdish_harmonization.tsv",
}
_CACHE: dict[TableMode, NormalizationTable] = {}


def shipped_table(mode: TableMode | str = TableMode.ENCODING_UNIFICATION) -> NormalizationTable:
    """Return one of the tables shipped with the package (cached)."""
    mode = TableMode(mode)
    if mode not in _CACHE:
        text = resources.files("kurdcorpus.data").joinpath(_SHIPPED[mode]).read_text(encoding="utf-8")
        _CACHE[mode] = NormalizationTable.parse(text, mode)
    return _CACHE[mode]


def unify_encoding(text: str, table: NormalizationTable | None = None) -> str:
    """Rewrite ``text`` with ``table`` (default: the shipped encoding-unification table)."""
    if table is None:
        table = shipped_table(TableMode.ENCODING_UNIFICATION)
    return table.apply(text)


# --------------------------------------------------------------------------
# cleaning

class DigitPolicy(str, enum.Enum):
    KEEP = "keep"
    FOLD_TO_ASCII = "fold-to-ascii"
    DROP = "drop"

    def __str__(self):
        return self.value


_URL = regex.compile(r"(?:https?://|ftp://|www\.)[^\s<>\"']+", regex.IGNORECASE)
_EMAIL = regex.compile(r"[A-Za-z0-9._%+\-]+@[A-Za-z0-9.\-]+\.[A-Za-z]{2,}")
_WS_RUN = regex.compile(r"[^\S\n]+")
_SPACE_AROUND_NL = regex.compile(r" *\n *")
_ARABIC_DIGITS = {chr(0x0660 + i): str(i) for i in range(10)}
_ARABIC_DIGITS.update({chr(0x06F0 + i): str(i) for i in range(10)})
_DIGIT_FOLD = str.maketrans(_ARABIC_DIGITS)
_TRAILING_URL_PUNCT = ".,;:!?)]}»"

_BOOL_TRUE = {"true", "yes", "1", "on"}
_BOOL_FALSE = {"false", "no", "0", "off"}


def _parse_bool(key: str, value: str) -> bool:
    v = value.strip().lower()
    if v in _BOOL_TRUE:
        return True
    if v in _BOOL_FALSE:
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


@dataclass(frozen=True)
class CleaningPolicy:
    strip_emails: bool = True
    strip_urls: bool = True
    collapse_whitespace: bool = True
    digit_policy: DigitPolicy = DigitPolicy.KEEP
    zwnj_to_space: bool = False

    CONFIG_KEYS = ("strip_emails", "strip_urls", "collapse_whitespace", "digit_policy", "zwnj_to_space")

    def __post_init__(self):
        if not isinstance(self.digit_policy, DigitPolicy):
            try:
                object.__setattr__(self, "digit_policy", DigitPolicy(self.digit_policy))
            except ValueError:
                raise ConfigError(f"unknown digit policy {self.digit_policy!r}") from None

    def is_noop(self) -> bool:
        return not (
            self.strip_emails or self.strip_urls or self.collapse_whitespace
            or self.zwnj_to_space or self.digit_policy is not DigitPolicy.KEEP
        )

    def to_config(self) -> dict[str, str]:
        return {
            "strip_emails": str(self.strip_emails).lower(),
            "strip_urls": str(self.strip_urls).lower(),
            "collapse_whitespace": str(self.collapse_whitespace).lower(),
            "digit_policy": self.digit_policy.value,
            "zwnj_to_space": str(self.zwnj_to_space).lower(),
        }

    @classmethod
    def from_config(cls, values: Mapping[str, str]) -> "CleaningPolicy":
        unknown = set(values) - set(cls.CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown cleaning keys: {', '.join(sorted(unknown))}")
        kwargs = {}
        for key, value in values.items():
            kwargs[key] = value.strip() if key == "digit_policy" else _parse_bool(key, value)
        return cls(**kwargs)


def clean(text: str, policy: CleaningPolicy | None = None) -> tuple[str, int]:
    """Remove URLs/e-mails, fold digits and tidy whitespace.

    Returns the cleaned text and the number of redactions (URLs plus e-mail
    addresses removed).  URLs are removed before e-mail addresses so that a
    ``user@host`` inside a URL is not counted twice.
    """
    if policy is None:
        policy = CleaningPolicy()
    if policy.is_noop():
        raise ConfigError("cleaning policy has every option disabled")
    count = 0
    if policy.strip_urls:
        def drop_url(m):
            url = m.group(0)
            kept = len(url.rstrip(_TRAILING_URL_PUNCT))
            return url[kept:]
        text, n = _URL.subn(drop_url, text)
        count += n
    if policy.strip_emails:
        text, n = _EMAIL.subn("", text)
        count += n
    if policy.digit_policy is DigitPolicy.FOLD_TO_ASCII:
        text = text.translate(_DIGIT_FOLD)
    elif policy.digit_policy is DigitPolicy.DROP:
        text = "".join(ch for ch in text if not ch.isdecimal())
    if policy.zwnj_to_space:
        text = text.replace(ZWNJ, " ")
    if policy.collapse_whitespace:
        text = _WS_RUN.sub(" ", text)
        text = _SPACE_AROUND_NL.sub("\n", text)
        text = regex.sub(r"\n{2,}", "\n", text).strip()
    return text, count


# --------------------------------------------------------------------------
# code-switch flagging

ARABIC_EXCLUSIVE = frozenset("ةثذصضطظء")
KURDISH_DISTINCTIVE = frozenset("ڵڕێۆەپچژگڤ")


class SwitchReason(str, enum.Enum):
    ARABIC_EXCLUSIVE_LETTERS = "arabic-exclusive-letters"
    NONE = "none"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CodeSwitchFlag:
    flagged: bool
    reason: SwitchReason
    score: float

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError("score must lie in [0, 1]")
        if self.flagged != (self.reason is not SwitchReason.NONE):
            raise ValueError("flagged must agree with reason")


def _is_arabic_block_letter(ch: str) -> bool:
    return "؀" <= ch <= "ۿ" and unicodedata.category(ch).startswith("L")


def flag_code_switch(sentence: str, threshold: float = 0.05) -> CodeSwitchFlag:
    """Flag a sentence that looks like embedded Arabic.

    The score is the share of Arabic-block letters that are letters Kurdish
    orthography never uses; any Kurdish-distinctive letter vetoes the flag.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    exclusive = block = 0
    kurdish = False
    for ch in sentence:
        if _is_arabic_block_letter(ch):
            block += 1
            if ch in ARABIC_EXCLUSIVE:
                exclusive += 1
            elif ch in KURDISH_DISTINCTIVE:
                kurdish = True
    score = exclusive / block if block else 0.0
    if score >= threshold and not kurdish and block:
        return CodeSwitchFlag(True, SwitchReason.ARABIC_EXCLUSIVE_LETTERS, score)
    return CodeSwitchFlag(False, SwitchReason.NONE, score)


# --------------------------------------------------------------------------
# orthography perturbation (diagnostic)

_TO_PERSIAN_INITIAL = (
    ("ئا", "آ"), ("ئێ", "ای"), ("ئۆ", "او"), ("ئە", "ا"), ("ئی", "ای"), ("ئو", "او"),
)
_TO_PERSIAN_LETTERS = str.maketrans({
    "ێ": "ی", "ۆ": "و", "ڵ": "ل", "ڕ": "ر", "ڤ": "و", "ۊ": "و",
})
_WORD = regex.compile(r"[\p{L}\p{M}\u200c]+")


def _persian_word(word: str) -> str:
    for kurdish, persian in _TO_PERSIAN_INITIAL:
        if word.startswith(kurdish):
            word = persian + word[len(kurdish):]
            break
    word = word.replace("وو", "و")
    if word.endswith("ە"):
        word = word[:-1].replace("ە", "") + "ه"
    else:
        word = word.replace("ە", "")
    return word.translate(_TO_PERSIAN_LETTERS) or word


def to_persian_orthography(text: str) -> str:
    """Re-spell Central-Kurdish-script text with Persian conventions.

    A deliberately lossy perturbation used to measure how a classifier copes
    with unconventional spelling: Kurdish-only letters are replaced by their
    nearest Persian letter, word-internal short ``e`` is dropped, word-final
    ``e`` becomes HEH and word-initial vowels take ALEF instead of the
    hamza carrier.
    """
    return _WORD.sub(lambda m: _persian_word(m.group(0)), text)
