"""Script detection and rule-based transliteration.

Rule tables are data files, one direction per file::

    <source hex> TAB <target hex> TAB <left class> TAB <right class> TAB <comment>

Context classes are ``letter``, ``vowel-letter``, ``boundary`` and ``any``.
The left class is tested on the last character already written to the
output, the right class on the input character after the match; ZWNJ is
transparent for both.  At each position the longest matching source wins
and, among rules with the same source, the first one whose context holds.

The Perso-Arabic side follows the older Central Kurdish typing convention
in which the vowel ``e`` is spelled with HEH: ``ه`` + ZWNJ inside a word
and bare ``ه`` at the end of a word (``le`` ↔ ``له``, ``şeqam`` ↔
``شه‌قام``).  In the Arabic-to-Latin direction the modern letter ``ە`` is
read as ``e`` as well, and a HEH that is neither word-final nor followed by
ZWNJ is read as ``h``.

Transliteration is lossy by design: the short vowel ``i`` is not written in
Perso-Arabic script and is never restored.
"""

from __future__ import annotations

import enum
import unicodedata
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import regex

from .core import ScriptCode
from .errors import TableError
from .normalize import ZWNJ, unify_encoding


class ContextClass(str, enum.Enum):
    LETTER = "letter"
    VOWEL_LETTER = "vowel-letter"
    BOUNDARY = "boundary"
    ANY = "any"

    def __str__(self):
        return self.value


# Letters that can spell a vowel.  On the Perso-Arabic side HEH is included
# because the legacy convention writes e with it; WAW and YEH are excluded
# because their reading is exactly what the context rules decide.
LATIN_VOWELS = frozenset("aeêiîouûüAEÊIÎOUÛÜ")
ARABIC_VOWEL_LETTERS = frozenset("اەێۆۊه")
VOWEL_LETTERS = LATIN_VOWELS | ARABIC_VOWEL_LETTERS


def _is_letter(ch: str | None) -> bool:
    return ch is not None and unicodedata.category(ch)[0] in "LM"


def _matches(cls: ContextClass, ch: str | None) -> bool:
    if cls is ContextClass.ANY:
        return True
    if cls is ContextClass.BOUNDARY:
        return not _is_letter(ch)
    if cls is ContextClass.LETTER:
        return _is_letter(ch)
    return ch is not None and ch in VOWEL_LETTERS


@dataclass(frozen=True)
class TransliterationRule:
    source: str
    target: str
    left: ContextClass = ContextClass.ANY
    right: ContextClass = ContextClass.ANY
    comment: str = ""

    def __post_init__(self):
        if not self.source:
            raise ValueError("rule source must be non-empty")
        for name in ("left", "right"):
            value = getattr(self, name)
            if not isinstance(value, ContextClass):
                try:
                    object.__setattr__(self, name, ContextClass(value))
                except ValueError:
                    raise ValueError(f"unknown context class {value!r}") from None


class RuleTable:
    """An ordered, immutable list of transliteration rules with a lookup index."""

    def __init__(self, rules: Iterable[TransliterationRule], name: str = ""):
        self.rules: tuple[TransliterationRule, ...] = tuple(rules)
        self.name = name
        index: dict[str, list[TransliterationRule]] = {}
        for rule in self.rules:
            index.setdefault(rule.source[0], []).append(rule)
        # longest source first; the sort is stable so file order breaks ties
        self._index = {k: sorted(v, key=lambda r: -len(r.source)) for k, v in index.items()}

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __repr__(self):
        return f"RuleTable({self.name!r}, rules={len(self.rules)})"

    def candidates(self, ch: str) -> list[TransliterationRule]:
        return self._index.get(ch, [])

    @classmethod
    def parse(cls, text: str, name: str = "") -> "RuleTable":
        rules = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 4:
                raise TableError(f"line {lineno}: expected source, target, left, right")
            try:
                rules.append(TransliterationRule(
                    _codepoints(parts[0]), _codepoints(parts[1]),
                    parts[2].strip() or "any", parts[3].strip() or "any",
                    "\t".join(parts[4:]).strip(),
                ))
            except ValueError as exc:
                raise TableError(f"line {lineno}: {exc}") from None
        return cls(rules, name)

    @classmethod
    def load(cls, path: str | Path) -> "RuleTable":
        path = Path(path)
        return cls.parse(path.read_text(encoding="utf-8"), path.stem)


def _codepoints(field: str) -> str:
    return "".join(chr(int(tok, 16)) for tok in field.split())


def _last_visible(out: list[str]) -> str | None:
    for piece in reversed(out):
        for ch in reversed(piece):
            if ch != ZWNJ:
                return ch
    return None


def _next_visible(text: str, pos: int) -> str | None:
    while pos < len(text):
        if text[pos] != ZWNJ:
            return text[pos]
        pos += 1
    return None


def apply_rules(text: str, table: RuleTable) -> str:
    """Single left-to-right pass of ``table`` over ``text``."""
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        for rule in table.candidates(text[i]):
            end = i + len(rule.source)
            if text.startswith(rule.source, i) and _matches(rule.left, _last_visible(out)) \
                    and _matches(rule.right, _next_visible(text, end)):
                out.append(rule.target)
                i = end
                break
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


_TABLE_FILES = {"arab2latn": "arab2latn.tsv", "latn2arab": "latn2arab.tsv"}
_TABLES: dict[str, RuleTable] = {}


def shipped_rules(name: str) -> RuleTable:
    """Load a shipped rule table: ``arab2latn`` or ``latn2arab``."""
    if name not in _TABLES:
        text = resources.files("kurdcorpus.data").joinpath(_TABLE_FILES[name]).read_text(encoding="utf-8")
        _TABLES[name] = RuleTable.parse(text, name)
    return _TABLES[name]


def arab_to_latin(text: str, rules: RuleTable | Sequence[TransliterationRule] | None = None) -> str:
    """Transliterate Perso-Arabic Kurdish into Hawar/Bedirxan Latin.

    The input is passed through encoding unification first (an idempotent
    step), so Arabic YEH/KAF and presentation forms are handled.
    """
    table = _as_table(rules, "arab2latn")
    return apply_rules(unify_encoding(text), table)


def latin_to_arab(text: str, rules: RuleTable | Sequence[TransliterationRule] | None = None) -> str:
    """Transliterate Hawar/Bedirxan Latin into Perso-Arabic Kurdish.

    Perso-Arabic script has no case, so the input is lower-cased first.
    """
    table = _as_table(rules, "latn2arab")
    return apply_rules(text.lower(), table)


def _as_table(rules, default: str) -> RuleTable:
    if rules is None:
        return shipped_rules(default)
    if isinstance(rules, RuleTable):
        return rules
    return RuleTable(rules)


def load_lexicon(path: str | Path | None = None) -> list[str]:
    """Words of a round-trip lexicon file (default: the shipped one)."""
    if path is None:
        text = resources.files("kurdcorpus.data").joinpath("roundtrip_lexicon.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return [w.strip() for w in text.splitlines() if w.strip() and not w.startswith("#")]


# --------------------------------------------------------------------------
# script detection

_ARABIC_RANGES = ((0x0600, 0x06FF), (0x0750, 0x077F), (0xFB50, 0xFEFF))
KURDISH_LETTERS = frozenset("ڵڕێۆەۊ")
# U+068A DAL WITH DOT BELOW is a Gorani grapheme
KURDISH_EXTRA_LETTERS = frozenset("ڊ")
TURKISH_LETTERS = frozenset("ıİğĞ")
_HAMZA_SEAT = "ئ"
_LATIN = regex.compile(r"\p{Script=Latin}")


def _is_arabic_letter(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _ARABIC_RANGES) and unicodedata.category(ch)[0] == "L"


def _is_latin_letter(ch: str) -> bool:
    return unicodedata.category(ch)[0] == "L" and _LATIN.match(ch) is not None


@dataclass(frozen=True)
class ScriptProfile:
    arabic_letters: int = 0
    latin_letters: int = 0
    kurdish_distinctive: int = 0
    other: int = 0

    def __post_init__(self):
        if min(self.arabic_letters, self.latin_letters, self.kurdish_distinctive, self.other) < 0:
            raise ValueError("counts must be non-negative")


def detect_script(text: str) -> tuple[ScriptCode, ScriptProfile]:
    """Classify the writing system of ``text``.

    Arabic versus Latin is decided by letter majority (a tie or no letters
    gives ``unknown``).  Arabic-script text counts as Kurdish orthography
    when it contains a Kurdish letter (ڵ ڕ ێ ۆ ە ۊ, or the Gorani ڊ) or a
    hamza seat ئ at a word edge -- Kurdish writes word-initial vowels with
    it while Persian never does -- and as Persian orthography otherwise.
    Latin text with a Turkish dotless i or g-breve is the Turkish-influenced
    Wikipedia convention.
    """
    arabic = latin = kurdish = other = 0
    turkish = False
    prev = None
    for i, ch in enumerate(text):
        if _is_arabic_letter(ch):
            arabic += 1
            if ch in KURDISH_LETTERS or ch in KURDISH_EXTRA_LETTERS:
                kurdish += 1
            elif ch == _HAMZA_SEAT:
                nxt = text[i + 1] if i + 1 < len(text) else None
                if not _is_letter(prev) or not _is_letter(nxt):
                    kurdish += 1
        elif _is_latin_letter(ch):
            latin += 1
            turkish = turkish or ch in TURKISH_LETTERS
        elif not ch.isspace():
            other += 1
        prev = ch
    profile = ScriptProfile(arabic, latin, kurdish, other)
    if arabic > latin:
        return (ScriptCode.ARAB if kurdish else ScriptCode.ARAB_FA), profile
    if latin > arabic:
        return (ScriptCode.LATN_WIKI if turkish else ScriptCode.LATN), profile
    return ScriptCode.UNKNOWN, profile


def script_histogram(lines: Iterable[str]) -> Counter:
    """Count detected scripts over an iterable of lines."""
    return Counter(detect_script(line)[0] for line in lines)
