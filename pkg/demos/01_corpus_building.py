"""
Building a corpus from saved news pages
=======================================

Turn a saved HTML article into a corpus document, unify its character
encoding, clean it, and flag sentences that look like embedded Arabic.

Run from the repository root:  python3 demos/01_corpus_building.py
"""

import io
from pathlib import Path

from kurdcorpus import (
    CleaningPolicy, DigitPolicy, clean, extract_article, flag_code_switch, read_corpus, unify_encoding, write_corpus,
)
from kurdcorpus.stats import tokenize_sentences

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"

# -- 1. extraction ------------------------------------------------------------
# The extractor keeps the headline, topic, date and the visible article body;
# navigation, scripts and footers are dropped.
doc = extract_article((DATA / "news_article.html").read_bytes(), source="demo-news")
print("title:", doc.title)
print("topic:", doc.topic, "| date:", doc.date)
print(doc.text)
print()

# -- 2. encoding unification -------------------------------------------------
# Web text mixes Arabic and Persian codepoints for the same Kurdish letter
# (Arabic kaf U+0643 vs keheh U+06A9, Arabic yeh vs Farsi yeh, ...).
messy = "كوردستان و كه‌ي"
print("before:", [f"U+{ord(c):04X}" for c in messy[:3]])
print("after: ", [f"U+{ord(c):04X}" for c in unify_encoding(messy)[:3]])
print()

# -- 3. cleaning -------------------------------------------------------------
policy = CleaningPolicy(digit_policy=DigitPolicy.FOLD_TO_ASCII)
text, removed = clean("پەیوەندی: info@example.org یان https://example.org/x ٢٠٢١", policy)
print(f"cleaned ({removed} items stripped):", text)
print()

# -- 4. code-switch flags ----------------------------------------------------
# Quotations in Arabic are flagged so that they do not inflate Kurdish type counts.
for sentence, _ in tokenize_sentences("ئەو لە ماڵ بوو. صِرَاطَ الَّذِينَ أَنْعَمْتَ عَلَيْهِمْ."):
    flag = flag_code_switch(sentence)
    print(f"{'FLAG' if flag.flagged else 'ok  '} score={float(flag.score):.3f}  {sentence}")
print()

# -- 5. the corpus file ------------------------------------------------------
# One JSON record per line; writing and reading again gives back the same documents.
buf = io.BytesIO()
write_corpus([doc], buf)
print(buf.getvalue().decode("utf-8")[:120], "...")
assert read_corpus(io.BytesIO(buf.getvalue())) == [doc]
