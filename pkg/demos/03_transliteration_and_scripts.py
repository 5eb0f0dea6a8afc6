"""
Transliteration and script detection
====================================

Rule-based conversion between the Perso-Arabic and Latin (Hawar) Kurdish
alphabets, and per-line script detection.

Run from the repository root:  python3 demos/03_transliteration_and_scripts.py
"""

from pathlib import Path

from kurdcorpus.translit import arab_to_latin, detect_script, latin_to_arab, load_lexicon, script_histogram

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"

for word in ["le", "şeqam", "kurdistan", "çawa", "rê"]:
    arabic = latin_to_arab(word)
    print(f"{word:10s} -> {arabic:10s} -> {arab_to_latin(arabic)}")

# The conjunction 'and' is a lone waw, read as û.
print("من و تۆ ->", arab_to_latin("من و تۆ"))

# Short i is not written in the Perso-Arabic script, so it cannot come back.
print("bira ->", latin_to_arab("bira"), "->", arab_to_latin(latin_to_arab("bira")))

lexicon = load_lexicon()
ok = sum(arab_to_latin(latin_to_arab(w)) == w for w in lexicon)
print(f"\nround trip on the shipped lexicon: {ok}/{len(lexicon)}")

print()
for sentence in ["ئەمڕۆ هەوا خۆشە", "امروز هوا خوب است", "Îro hewa xweş e", "Ma zıwanê xo qisey kenê"]:
    script, profile = detect_script(sentence)
    print(f"{script.value:10s} {profile}  {sentence}")

rows = [line.split("\t")[1] for line in (DATA / "script_fixture.tsv").read_text(encoding="utf-8").splitlines()
        if line and not line.startswith("#")]
print("\nscript histogram of the fixture:", {k.value: v for k, v in script_histogram(rows).items()})
