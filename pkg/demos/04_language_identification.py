"""
Language and script identification
==================================

Split the desk corpus, train the hashed n-gram classifier under both label
schemes, evaluate it, and watch it degrade on Persian-spelled Kurdish.

Run from the repository root:  python3 demos/04_language_identification.py
(about half a minute; the default model has 2M hash buckets, ~0.5 GB)
"""

import time
from pathlib import Path

from kurdcorpus import Label, LabeledSentence, build_lid_dataset
from kurdcorpus.lid import LabelScheme, LidHyperparams, aggregate_dataset, evaluate, train
from kurdcorpus.normalize import to_persian_orthography

DATA = Path(__file__).resolve().parents[1] / "tests" / "data" / "lid_desk"

corpora = {Label.parse(p.stem): p.read_text(encoding="utf-8").splitlines() for p in sorted(DATA.glob("*.txt"))}
train_set, test_set = build_lid_dataset(corpora, 600, 0.2, seed=1)
print(f"{len(corpora)} labels, {len(train_set)} training and {len(test_set)} test sentences\n")

models = {}
for scheme in LabelScheme:
    start = time.perf_counter()
    result = train(aggregate_dataset(train_set, scheme), LidHyperparams(), scheme)
    report = evaluate(result.model, aggregate_dataset(test_set, scheme))
    models[scheme] = result.model
    print(f"== {scheme}  ({time.perf_counter() - start:.1f} s, final-epoch loss {result.final_epoch_loss:.4f})")
    print(report.to_text())

model = models[LabelScheme.LANGUAGE_AND_SCRIPT]
for sentence in ["ئەمڕۆ هەوا زۆر خۆشە", "Ez ê sibê biçim bajêr", "Bugün hava çok güzel", "امروز هوا خوب است"]:
    pred = model.predict(sentence, k=2)
    print(" | ".join(f"{lab} {p:.3f}" for lab, p in pred.ranked), "  <-", sentence)

# Re-spell the Kurdish Perso-Arabic test sentences with Persian letters.
noisy = [LabeledSentence(to_persian_orthography(s.text), s.label)
         if s.label.serialize() in ("ckb-arab", "kmr-arab", "sdh-arab") else s for s in test_set]
print("\nmacro F1 clean    :", round(evaluate(model, test_set).macro_f1, 4))
print("macro F1 perturbed:", round(evaluate(model, noisy).macro_f1, 4))
print(evaluate(model, noisy).confusion_csv())
