"""Regenerate the shipped normalization tables under src/kurdcorpus/data/.

The presentation-form entries are derived from the Unicode character
database (NFKC decompositions of U+FB50..U+FDFF and U+FE70..U+FEFE), then
passed through the base folds so that no target contains a source.

    python scripts/build_tables.py
"""

import unicodedata
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "kurdcorpus" / "data"

BASE_FOLDS = [
    ("ي", "ی", "ARABIC LETTER YEH -> FARSI YEH"),
    ("ى", "ی", "ARABIC LETTER ALEF MAKSURA -> FARSI YEH"),
    ("ك", "ک", "ARABIC LETTER KAF -> KEHEH"),
    ("ھ", "ه", "HEH DOACHASHMEE -> HEH"),
    ("ـ", "", "TATWEEL removed"),
]


def fold(text: str) -> str:
    for src, dst, _ in BASE_FOLDS:
        text = text.replace(src, dst)
    return text


def hexes(text: str) -> str:
    return " ".join(f"{ord(c):04X}" for c in text)


def presentation_forms():
    ranges = list(range(0xFB50, 0xFE00)) + list(range(0xFE70, 0xFEFF))
    for cp in ranges:
        ch = chr(cp)
        if unicodedata.category(ch) == "Cn":
            continue
        decomp = unicodedata.decomposition(ch)
        if not decomp.startswith("<"):
            continue
        target = fold(unicodedata.normalize("NFKC", ch))
        if target == ch:
            continue
        yield ch, target, unicodedata.name(ch)


def write_unification():
    lines = [
        "# Encoding unification: safe, lossless-in-intent folds for Perso-Arabic text.",
        "# Reconstructed table (the exact folds of the source study are not published).",
        "# Format: source-hex TAB target-hex TAB comment; empty target deletes.",
        "# Generated by scripts/build_tables.py; edit the script, not this file.",
    ]
    for src, dst, comment in BASE_FOLDS:
        lines.append(f"{hexes(src)}\t{hexes(dst)}\t{comment}")
    for src, dst, name in presentation_forms():
        lines.append(f"{hexes(src)}\t{hexes(dst)}\t{name}")
    (DATA / "encoding_unification.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_harmonization():
    lines = [
        "# Kurdish harmonization: opt-in, LOSSY and approximate.",
        "# Rewrites Persian-orthography conventions into the Central Kurdish script.",
        "# '^' marks a word start, '$' a word end (neighbour is not a letter, mark or ZWNJ).",
        "# Word-final HEH is assumed to be the vowel e; genuine final h is corrupted.",
        "0647 200C\t06D5\tHEH + ZWNJ -> AE (Persian-style e)",
        "0647 $\t06D5\tword-final HEH -> AE",
        "^ 0631\t0695\tword-initial REH -> REH WITH SMALL V BELOW (initial r is trilled)",
    ]
    (DATA / "kurdish_harmonization.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    write_unification()
    write_harmonization()
