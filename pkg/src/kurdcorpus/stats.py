"""Tokenization, type counts, corpus statistics and rank-frequency analysis.

Tokenizer rules (a regular-expression reconstruction):

* a *word* is a run of letters and combining marks; ZWNJ joins runs and may
  also sit at either end of a word, so Persian-orthography compounds such as
  ``هه‌یفاهه`` stay a single token;
* a *digit* token is a run of decimal digits (any script);
* every other non-whitespace codepoint is a single *punctuation* token.

Sentences end after terminal punctuation (``. ! ? ؟ ۔ …``) and at line
breaks; they are only used to decide which tokens belong to a code-switched
sentence.
"""

from __future__ import annotations

import csv
import enum
import io
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
import regex

from .core import Document, LanguageCode
from .errors import EmptyCorpus, EmptyInput, RangeTooSmall, TableError
from .normalize import flag_code_switch


class TokenKind(str, enum.Enum):
    WORD = "word"
    PUNCTUATION = "punctuation"
    DIGIT = "digit"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")
        if (self.kind is TokenKind.DIGIT) != all(ch.isdecimal() for ch in self.surface):
            raise ValueError(f"digit kind mismatch for {self.surface!r}")


_LETTERS = r"[\p{L}\p{M}]+"
_WORD_JOINED = rf"\u200c*{_LETTERS}(?:\u200c+{_LETTERS})*\u200c*"
_TOKEN_RE = regex.compile(rf"(?P<w>{_WORD_JOINED})|(?P<d>\p{{Nd}}+)|(?P<p>\S)")
_TOKEN_RE_SPLIT = regex.compile(rf"(?P<w>{_LETTERS})|(?P<d>\p{{Nd}}+)|(?P<p>\S)")
_KINDS = {"w": TokenKind.WORD, "d": TokenKind.DIGIT, "p": TokenKind.PUNCTUATION}
TERMINAL_PUNCTUATION = frozenset(".!?؟۔…")


def _scan(text: str, split_zwnj: bool):
    pattern = _TOKEN_RE_SPLIT if split_zwnj else _TOKEN_RE
    for m in pattern.finditer(text):
        yield m.start(), m.end(), Token(m.group(0), _KINDS[m.lastgroup])


def tokenize(text: str, split_zwnj: bool = False) -> list[Token]:
    """Split ``text`` into word, digit and punctuation tokens.

    With ``split_zwnj`` set, ZWNJ no longer joins letter runs and becomes a
    punctuation token of its own.
    """
    return [tok for _, _, tok in _scan(text, split_zwnj)]


def tokenize_sentences(text: str, split_zwnj: bool = False) -> list[tuple[str, list[Token]]]:
    """Tokenize and group tokens into sentences.

    Returns ``(sentence_text, tokens)`` pairs where ``sentence_text`` is the
    input span from the first to the last token of the sentence.
    """
    sentences: list[tuple[str, list[Token]]] = []
    current: list[Token] = []
    start = end = 0

    def close():
        if current:
            sentences.append((text[start:end], list(current)))
            current.clear()

    for s, e, tok in _scan(text, split_zwnj):
        if current and ("\n" in text[end:s] or (
            current[-1].surface in TERMINAL_PUNCTUATION
            and tok.surface not in TERMINAL_PUNCTUATION
        )):
            close()
        if not current:
            start = s
        current.append(tok)
        end = e
    close()
    return sentences


DEFAULT_EXCLUSIONS = frozenset({TokenKind.PUNCTUATION, TokenKind.DIGIT})


def extract_types(
    tokens,
    exclusions: Iterable[TokenKind] = DEFAULT_EXCLUSIONS,
    drop_flagged: Sequence | None = None,
) -> dict[str, int]:
    """Count word types.

    ``tokens`` is a flat token sequence, or -- when ``drop_flagged`` is given
    -- a sequence of per-sentence token sequences aligned with
    ``drop_flagged``.  Entries of ``drop_flagged`` may be booleans or
    :class:`~kurdcorpus.normalize.CodeSwitchFlag` objects; tokens of flagged
    sentences are not counted.  Only word tokens ever become types.
    """
    excluded = set(exclusions)
    counts: Counter[str] = Counter()

    def take(seq):
        for tok in seq:
            if tok.kind is TokenKind.WORD and tok.kind not in excluded:
                counts[tok.surface] += 1

    if drop_flagged is None:
        take(tokens)
    else:
        sentences = list(tokens)
        flags = list(drop_flagged)
        if len(sentences) != len(flags):
            raise ValueError("drop_flagged must have one entry per sentence")
        for sentence, flag in zip(sentences, flags):
            if not getattr(flag, "flagged", flag):
                take(sentence)
    return dict(counts)


@dataclass(frozen=True)
class StatsReport:
    articles: int
    tokens: int
    types: int
    type_characters: int
    average_type_length: Fraction
    flagged_sentences: int = 0

    def __post_init__(self):
        if min(self.articles, self.tokens, self.types, self.type_characters, self.flagged_sentences) < 0:
            raise ValueError("counts must be non-negative")
        if self.types > self.tokens:
            raise ValueError("types cannot exceed tokens")
        if self.average_type_length * self.types != self.type_characters:
            raise ValueError("average_type_length must equal type_characters / types")

    def to_record(self) -> dict:
        return {
            "articles": self.articles,
            "tokens": self.tokens,
            "types": self.types,
            "type_characters": self.type_characters,
            "average_type_length": float(self.average_type_length),
            "flagged_sentences": self.flagged_sentences,
        }

    def to_text(self) -> str:
        rec = self.to_record()
        rec["average_type_length"] = f"{float(self.average_type_length):.6f}"
        return "".join(f"{k}: {v}\n" for k, v in rec.items())


def _report(articles: int, tokens: int, type_counts: Mapping[str, int], flagged: int) -> StatsReport:
    types = len(type_counts)
    chars = sum(len(t) for t in type_counts)
    average = Fraction(chars, types) if types else Fraction(0)
    return StatsReport(articles, tokens, types, chars, average, flagged)


def corpus_stats(
    corpus: Iterable[Document],
    code_switch_threshold: float | None = 0.05,
    split_zwnj: bool = False,
) -> StatsReport:
    """Article, token and type statistics of a corpus.

    Token counts include punctuation and digits; types are word types from
    sentences not flagged as code-switched (pass ``code_switch_threshold=None``
    to keep every sentence).  Characters are counted as Unicode scalar values.
    """
    articles = tokens = flagged = 0
    counts: Counter[str] = Counter()
    for doc in corpus:
        articles += 1
        sentences = tokenize_sentences(doc.text, split_zwnj=split_zwnj)
        flags = []
        for sentence_text, toks in sentences:
            tokens += len(toks)
            is_flagged = (
                code_switch_threshold is not None
                and flag_code_switch(sentence_text, code_switch_threshold).flagged
            )
            flags.append(is_flagged)
            flagged += is_flagged
        counts.update(extract_types([t for _, t in sentences], drop_flagged=flags))
    if articles == 0:
        raise EmptyCorpus("corpus contains no documents")
    return _report(articles, tokens, counts, flagged)


# --------------------------------------------------------------------------
# rank-frequency analysis

@dataclass(frozen=True)
class RankRow:
    rank: int
    type: str
    frequency: int


@dataclass(frozen=True)
class RankFrequencyTable:
    rows: tuple[RankRow, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        for i, row in enumerate(self.rows):
            if row.rank != i + 1:
                raise ValueError("ranks must be consecutive from 1")
            prev = self.rows[i - 1] if i else None
            if prev is not None and (-prev.frequency, prev.type) >= (-row.frequency, row.type):
                raise ValueError("rows must be ordered by descending frequency, then type")

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def frequencies(self) -> np.ndarray:
        return np.array([r.frequency for r in self.rows], dtype=np.float64)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rank", "type", "frequency"])
        for r in self.rows:
            writer.writerow([r.rank, r.type, r.frequency])
        return buf.getvalue()


def _ordered(type_counts: Mapping[str, int]) -> list[tuple[str, int]]:
    return sorted(type_counts.items(), key=lambda kv: (-kv[1], kv[0]))


def rank_frequency(type_counts: Mapping[str, int]) -> RankFrequencyTable:
    """Rank types by descending frequency; ties are broken by code-point order."""
    if not type_counts:
        raise EmptyInput("no types to rank")
    return RankFrequencyTable(
        tuple(RankRow(i, t, f) for i, (t, f) in enumerate(_ordered(type_counts), start=1))
    )


def zipf_fit(table: RankFrequencyTable, rank_min: int = 1, rank_max: int | None = None) -> tuple[float, float]:
    """Least-squares line through (log10 rank, log10 frequency) for ranks in the window.

    Returns ``(slope, intercept)``.
    """
    if rank_max is None:
        rank_max = len(table)
    if rank_min < 1 or rank_max < rank_min:
        raise RangeTooSmall(f"invalid rank window {rank_min}..{rank_max}")
    if rank_max > len(table):
        raise RangeTooSmall(f"rank_max {rank_max} exceeds table size {len(table)}")
    if rank_max - rank_min + 1 < 3:
        raise RangeTooSmall("at least 3 ranks are required for a fit")
    rows = table.rows[rank_min - 1:rank_max]
    x = np.log10(np.array([r.rank for r in rows], dtype=np.float64))
    y = np.log10(np.array([r.frequency for r in rows], dtype=np.float64))
    dx = x - x.mean()
    slope = float(np.dot(dx, y - y.mean()) / np.dot(dx, dx))
    intercept = float(y.mean() - slope * x.mean())
    return slope, intercept


def top_k(type_counts: Mapping[str, int], k: int) -> list[tuple[str, int]]:
    if k < 1:
        raise ValueError("k must be >= 1")
    return _ordered(type_counts)[:k]


# --------------------------------------------------------------------------
# affix cues

class AffixPosition(str, enum.Enum):
    PREFIX = "prefix"
    SUFFIX = "suffix"

    def __str__(self):
        return self.value


AFFIX_VARIETIES = frozenset({LanguageCode.KMR, LanguageCode.CKB, LanguageCode.SDH, LanguageCode.LKI})


@dataclass(frozen=True)
class AffixEntry:
    variety: LanguageCode
    category: str
    affix: str
    position: AffixPosition

    def __post_init__(self):
        object.__setattr__(self, "variety", LanguageCode.parse(str(self.variety)))
        object.__setattr__(self, "position", AffixPosition(self.position))
        if not self.affix:
            raise ValueError("affix must be non-empty")
        if self.variety not in AFFIX_VARIETIES:
            raise ValueError(f"affix variety must be one of kmr, ckb, sdh, lki; got {self.variety}")


@dataclass(frozen=True)
class AffixInventory:
    entries: tuple[AffixEntry, ...]

    @classmethod
    def parse(cls, text: str) -> "AffixInventory":
        entries = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise TableError(f"line {lineno}: expected 4 tab-separated fields")
            try:
                entries.append(AffixEntry(*(p.strip() for p in parts)))
            except ValueError as exc:
                raise TableError(f"line {lineno}: {exc}") from None
        return cls(tuple(entries))

    @classmethod
    def load(cls, path: str | Path) -> "AffixInventory":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def shipped(cls) -> "AffixInventory":
        text = resources.files("kurdcorpus.data").joinpath("affixes.tsv").read_text(encoding="utf-8")
        return cls.parse(text)


def variety_cues(tokens: Iterable[Token], inventory: AffixInventory) -> dict[LanguageCode, int]:
    """Count affix matches per variety (diagnostic only).

    For each word token and each variety, the longest matching prefix and
    the longest matching suffix each count once.  An affix only matches when
    a non-empty stem remains.
    """
    if not inventory.entries:
        raise ValueError("affix inventory is empty")
    by_variety: dict[LanguageCode, dict[AffixPosition, list[str]]] = {}
    for e in inventory.entries:
        by_variety.setdefault(e.variety, {AffixPosition.PREFIX: [], AffixPosition.SUFFIX: []})
        by_variety[e.variety][e.position].append(e.affix)
    totals = {v: 0 for v in sorted(by_variety, key=lambda c: c.value)}
    for tok in tokens:
        if tok.kind is not TokenKind.WORD:
            continue
        word = tok.surface
        for variety, affixes in by_variety.items():
            # only whether some affix matches matters; the longest one is the one counted
            if any(len(word) > len(a) and word.startswith(a) for a in affixes[AffixPosition.PREFIX]):
                totals[variety] += 1
            if any(len(word) > len(a) and word.endswith(a) for a in affixes[AffixPosition.SUFFIX]):
                totals[variety] += 1
    return totals
