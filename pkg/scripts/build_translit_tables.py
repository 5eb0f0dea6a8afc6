"""Regenerate the shipped transliteration rule tables and round-trip lexicon.

    python scripts/build_translit_tables.py [--lexicon-source WORDS.txt]

Rules are listed here in readable form and written as hex TSV under
src/kurdcorpus/data/.  The round-trip lexicon is built by brute force: every
candidate Latin word whose latin -> arab -> latin transliteration is the
identity is kept.  Candidates come from a plain word list (one word per
line); the shipped lexicon was drawn from the Central Kurdish Latin lexicon
of the KLPT toolkit (CC BY-SA 4.0).
"""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "src" / "kurdcorpus" / "data"
sys.path.insert(0, str(ROOT / "src"))

ZWNJ = "‌"
B, L, V, A = "boundary", "letter", "vowel-letter", "any"

# (source, target, left, right, comment); order matters among equal sources
LATN2ARAB = [
    ("a", "ئا", B, A, "word-initial a takes the hamza seat"),
    ("a", "ا", A, A, ""),
    ("e", "ئه", B, B, "the one-letter word e"),
    ("e", "ئه" + ZWNJ, B, A, "word-initial e"),
    ("e", "ه", A, B, "word-final e: bare HEH"),
    ("e", "ه" + ZWNJ, A, A, "word-internal e: HEH + ZWNJ"),
    ("ê", "ئێ", B, A, ""),
    ("ê", "ێ", A, A, ""),
    ("i", "ئ", B, A, "word-initial i: hamza seat only"),
    ("i", "", A, A, "short i is not written"),
    ("î", "ئی", B, A, ""),
    ("î", "ی", A, A, ""),
    ("o", "ئۆ", B, A, ""),
    ("o", "ۆ", A, A, ""),
    ("u", "ئو", B, A, ""),
    ("u", "و", A, A, ""),
    ("û", "و", B, B, "the conjunction û 'and'"),
    ("û", "ئوو", B, A, ""),
    ("û", "وو", A, A, ""),
    ("ü", "ئۊ", B, A, "Southern Kurdish vowel"),
    ("ü", "ۊ", A, A, "Southern Kurdish vowel"),
    ("b", "ب", A, A, ""),
    ("c", "ج", A, A, ""),
    ("ç", "چ", A, A, ""),
    ("d", "د", A, A, ""),
    ("f", "ف", A, A, ""),
    ("g", "گ", A, A, ""),
    ("h", "ه", A, A, ""),
    ("ḧ", "ح", A, A, ""),
    ("j", "ژ", A, A, ""),
    ("k", "ک", A, A, ""),
    ("l", "ل", A, A, ""),
    ("ł", "ڵ", A, A, ""),
    ("m", "م", A, A, ""),
    ("n", "ن", A, A, ""),
    ("p", "پ", A, A, ""),
    ("q", "ق", A, A, ""),
    ("r", "ر", A, A, ""),
    ("ř", "ڕ", A, A, ""),
    ("s", "س", A, A, ""),
    ("ş", "ش", A, A, ""),
    ("t", "ت", A, A, ""),
    ("v", "ڤ", A, A, ""),
    ("w", "و", A, A, ""),
    ("x", "خ", A, A, ""),
    ("ẍ", "غ", A, A, ""),
    ("y", "ی", A, A, ""),
    ("z", "ز", A, A, ""),
    ("?", "؟", A, A, ""),
    (",", "،", A, A, ""),
    (";", "؛", A, A, ""),
]

ARAB2LATN = [
    ("ئه" + ZWNJ, "e", B, A, "word-initial e (legacy)"),
    ("ئه", "e", B, B, "the one-letter word e (legacy)"),
    ("ئە", "e", B, A, "word-initial e"),
    ("ئا", "a", B, A, ""),
    ("ئێ", "ê", B, A, ""),
    ("ئۆ", "o", B, A, ""),
    ("ئوو", "û", B, A, ""),
    ("ئو", "u", B, A, ""),
    ("ئی", "î", B, A, ""),
    ("ئۊ", "ü", B, A, ""),
    ("ئ", "i", B, A, "word-initial hamza seat before a consonant"),
    ("ئ", "", A, A, "hamza seat elsewhere"),
    ("ه" + ZWNJ, "e", A, A, "legacy e inside a word"),
    ("ه", "e", A, B, "word-final HEH is the vowel e"),
    ("ه", "h", A, A, "word-internal HEH"),
    ("ە", "e", A, A, ""),
    ("ا", "a", A, A, ""),
    ("آ", "a", A, A, ""),
    ("ێ", "ê", A, A, ""),
    ("ۆ", "o", A, A, ""),
    ("ۊ", "ü", A, A, "Southern Kurdish vowel"),
    ("وو", "û", A, A, ""),
    ("و", "û", B, B, "standalone conjunction"),
    ("و", "w", B, A, "word-initial WAW is consonantal"),
    ("و", "w", V, A, "WAW after a vowel"),
    ("و", "w", A, V, "WAW before a vowel letter"),
    ("و", "u", A, A, "vocalic reading"),
    ("ی", "y", B, A, "word-initial YEH is consonantal"),
    ("ی", "y", V, A, "YEH after a vowel"),
    ("ی", "y", A, V, "YEH before a vowel letter"),
    ("ی", "î", A, A, "vocalic reading"),
    ("ب", "b", A, A, ""),
    ("ج", "c", A, A, ""),
    ("چ", "ç", A, A, ""),
    ("د", "d", A, A, ""),
    ("ڊ", "d", A, A, "Gorani dal"),
    ("ف", "f", A, A, ""),
    ("گ", "g", A, A, ""),
    ("ح", "ḧ", A, A, ""),
    ("ژ", "j", A, A, ""),
    ("ک", "k", A, A, ""),
    ("ل", "l", A, A, ""),
    ("ڵ", "ł", A, A, ""),
    ("م", "m", A, A, ""),
    ("ن", "n", A, A, ""),
    ("پ", "p", A, A, ""),
    ("ق", "q", A, A, ""),
    ("ر", "r", A, A, ""),
    ("ڕ", "ř", A, A, ""),
    ("س", "s", A, A, ""),
    ("ش", "ş", A, A, ""),
    ("ت", "t", A, A, ""),
    ("ڤ", "v", A, A, ""),
    ("خ", "x", A, A, ""),
    ("غ", "ẍ", A, A, ""),
    ("ز", "z", A, A, ""),
    ("ع", "'", A, A, "AIN"),
    ("ء", "'", A, A, "HAMZA"),
    ("أ", "e", A, A, "Arabic loans"),
    ("إ", "i", A, A, "Arabic loans"),
    ("ؤ", "u", A, A, "Arabic loans"),
    ("ة", "e", A, A, "Arabic loans"),
    ("ۀ", "e", A, A, "Persian ezafe HEH"),
    ("ث", "s", A, A, "Arabic loans"),
    ("ذ", "z", A, A, "Arabic loans"),
    ("ص", "s", A, A, "Arabic loans"),
    ("ض", "z", A, A, "Arabic loans"),
    ("ط", "t", A, A, "Arabic loans"),
    ("ظ", "z", A, A, "Arabic loans"),
    ("؟", "?", A, A, ""),
    ("،", ",", A, A, ""),
    ("؛", ";", A, A, ""),
]


def hexes(text):
    return " ".join(f"{ord(c):04X}" for c in text)


def write_rules(path, rules, title):
    lines = [
        f"# {title}",
        "# Format: source-hex TAB target-hex TAB left-class TAB right-class TAB comment",
        "# Generated by scripts/build_translit_tables.py.",
    ]
    for src, tgt, left, right, comment in rules:
        note = f"{src.replace(ZWNJ, '<ZWNJ>')} -> {tgt.replace(ZWNJ, '<ZWNJ>') or '(nothing)'}"
        lines.append(f"{hexes(src)}\t{hexes(tgt)}\t{left}\t{right}\t{note}; {comment}".rstrip("; "))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def build_lexicon(candidates):
    from kurdcorpus import translit

    translit._TABLES.clear()
    alphabet = set("abcçdeêfghḧijklłmnopqrřsştuûvwxẍyzîü")
    kept = []
    for word in candidates:
        if not word or not set(word) <= alphabet or len(word) < 2:
            continue
        if translit.arab_to_latin(translit.latin_to_arab(word)) == word:
            kept.append(word)
    return sorted(set(kept))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--lexicon-source", type=Path, help="candidate Latin words, one per line")
    args = parser.parse_args()
    write_rules(DATA / "latn2arab.tsv", LATN2ARAB, "Hawar/Bedirxan Latin -> Central Kurdish Perso-Arabic")
    write_rules(DATA / "arab2latn.tsv", ARAB2LATN, "Central Kurdish Perso-Arabic -> Hawar/Bedirxan Latin")
    if args.lexicon_source:
        words = args.lexicon_source.read_text(encoding="utf-8").split()
        kept = build_lexicon(words)
        header = (
            "# Round-trip lexicon: latin -> arab -> latin is the identity for every word.\n"
            "# Selected by brute force from the Central Kurdish Latin lexicon of KLPT (CC BY-SA 4.0).\n"
        )
        (DATA / "roundtrip_lexicon.txt").write_text(header + "\n".join(kept) + "\n", encoding="utf-8")
        print(f"lexicon: kept {len(kept)} of {len(words)} candidates")


if __name__ == "__main__":
    main()
