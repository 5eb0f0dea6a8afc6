"""
Corpus statistics and Zipf's law
================================

Token and type counts, the rank/frequency table, a log-log Zipf fit, and
affix-based variety cues.

Run from the repository root:  python3 demos/02_corpus_statistics.py
"""

from pathlib import Path

import numpy as np

from kurdcorpus import Document, corpus_stats, rank_frequency, top_k, zipf_fit
from kurdcorpus.stats import AffixInventory, extract_types, tokenize, variety_cues
from kurdcorpus.translit import arab_to_latin

DATA = Path(__file__).resolve().parents[1] / "tests" / "data" / "lid_desk"

# A small Central Kurdish sample: the desk LID lines for ckb-arab.
lines = (DATA / "ckb-arab.txt").read_text(encoding="utf-8").splitlines()
docs = [Document(f"ckb{i}", line, "desk") for i, line in enumerate(lines)]

report = corpus_stats(docs)
print(report.to_text())
# average type length is an exact fraction, so this identity holds exactly
assert report.average_type_length * report.types == report.type_characters

types = {}
for doc in docs:
    for t, n in extract_types(tokenize(doc.text)).items():
        types[t] = types.get(t, 0) + n

print("most frequent types:")
for word, freq in top_k(types, 8):
    print(f"  {word}\t{freq}")

table = rank_frequency(types)
freqs = table.frequencies()
assert np.all(np.diff(freqs) <= 0)
slope, intercept = zipf_fit(table)
# The desk lines are sampled word sequences rather than running text, so the
# curve is flatter than the slope near -1 that natural text shows.
print(f"\nlog10(freq) = {intercept:.3f} {slope:+.3f} * log10(rank)   over {len(table)} ranks")

# On an exact power law the fit recovers the exponent.
from kurdcorpus.stats import RankFrequencyTable, RankRow  # noqa: E402

exact = RankFrequencyTable([RankRow(r, f"w{r}", 5000 * r ** -1.2) for r in range(1, 500)])
print("exact power law, exponent 1.2 ->", -zipf_fit(exact)[0])

# Affix cues are a diagnostic: how many tokens carry a variety-specific affix.
# The inventory is written in the Latin alphabet, so transliterate first.
sdh = (DATA / "sdh-arab.txt").read_text(encoding="utf-8").splitlines()[:200]
tokens = [t for line in sdh for t in tokenize(arab_to_latin(line))]
print("\nvariety cues on 200 sdh-arab lines:",
      {k.value: v for k, v in variety_cues(tokens, AffixInventory.shipped()).items()})
