"""Build the desk-scale language-identification corpus in tests/data/lid_desk/.

    python scripts/build_desk_data.py --klpt-data DIR --wordfreq-data DIR

No natural-sentence corpus for Kurdish varieties is reachable offline, so
the desk corpus consists of pseudo-sentences: word sequences sampled from
public word lists with a Zipf-weighted function-word channel and a uniform
content-word channel.

Sources
  * KLPT 0.1.7 data (CC BY-SA 4.0): Central Kurdish lexicons in Perso-Arabic
    and Latin script, Northern Kurdish Latin lexicon, Sorani/Kurmanji
    stopword lists.
  * wordfreq 3.1.1 "small" frequency lists (CC BY-SA 4.0) for Arabic,
    Persian and Turkish.

Derived labels
  * kmr-arab: kmr-latn sentences transliterated with the toolkit's own
    latin->arab rules and harmonized to Central Kurdish letters.
  * sdh-arab: Central Kurdish content words re-inflected with Southern
    Kurdish affixes (-ege, -egan, -îg, -eyl, -gel) and combined with the most
    frequent Southern Kurdish function words; this label is synthetic.
"""

import argparse
import gzip
import json
import sys
from pathlib import Path

import msgpack
import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from kurdcorpus.normalize import TableMode, shipped_table, unify_encoding  # noqa: E402
from kurdcorpus.rng import make_rng  # noqa: E402
from kurdcorpus.translit import arab_to_latin, latin_to_arab  # noqa: E402

OUT = ROOT / "tests" / "data" / "lid_desk"
LINES_PER_LABEL = 700

SDH_FUNCTION_LATIN = [
    "e", "û", "ki", "we", "era", "ew", "kird", "wit", "herêm", "kurdistan", "ta", "le",
    "abadî", "naw", "wegerd", "ê", "î", "weşîn", "bûn", "ye", "eřa", "dirêj", "hûşyar",
]


def harmonize(text):
    return shipped_table(TableMode.KURDISH_HARMONIZATION).apply(text)


def load_wordfreq(path, lang, top):
    data = msgpack.unpackb(gzip.open(path / f"small_{lang}.msgpack.gz").read(), raw=False)
    words, weights = [], []
    for cb, bucket in enumerate(data[1:]):
        for w in bucket:
            words.append(w)
            weights.append(10 ** (-cb / 100))
    return words[:top], np.array(weights[:top])


class Sampler:
    def __init__(self, rng, function_words, content_words, p_function, suffixes=(), p_suffix=0.0,
                 weights=None):
        self.rng = rng
        self.function_words = list(function_words)
        self.content_words = list(content_words)
        self.p_function = p_function
        self.suffixes = list(suffixes)
        self.p_suffix = p_suffix
        fw = 1.0 / np.arange(1, len(self.function_words) + 1) if self.function_words else None
        self.fw_p = fw / fw.sum() if fw is not None else None
        self.cw_p = None if weights is None else weights / weights.sum()

    def word(self):
        if self.function_words and self.rng.random() < self.p_function:
            return self.function_words[self.rng.choice(len(self.function_words), p=self.fw_p)]
        w = self.content_words[self.rng.choice(len(self.content_words), p=self.cw_p)]
        if self.suffixes and self.rng.random() < self.p_suffix:
            w += self.suffixes[self.rng.integers(len(self.suffixes))]
        return w

    def sentence(self, end=".", comma=","):
        n = int(self.rng.integers(6, 15))
        words = [self.word() for _ in range(n)]
        if n > 9 and self.rng.random() < 0.3:
            words[int(self.rng.integers(3, n - 2))] += comma
        return " ".join(words) + end


def simple(words):
    return [w for w in words if w.isalpha() and "-" not in w and " " not in w]


def generate(sampler, count, end=".", comma=",", transform=None):
    seen = set()
    out = []
    while len(out) < count:
        s = sampler.sentence(end, comma)
        if transform is not None:
            s = transform(s)
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def main():
    parser = argparse.ArgumentParser(description="build the desk LID corpus")
    parser.add_argument("--klpt-data", type=Path, required=True)
    parser.add_argument("--wordfreq-data", type=Path, required=True)
    parser.add_argument("--seed", type=int, default=20240601)
    args = parser.parse_args()
    rng = make_rng(args.seed)

    stop = json.loads((args.klpt_data / "stopwords.json").read_text(encoding="utf-8"))
    sorani = [unify_encoding(w) for w in stop["Sorani"]["Arabic"]]
    kurmanji = stop["Kurmanji"]["Latin"]
    ckb_arab = simple(unify_encoding(w) for w in json.loads(
        (args.klpt_data / "lexicon_ckb_arab.json").read_text(encoding="utf-8"))["Lexicon"])
    ckb_latn = simple(json.loads((args.klpt_data / "lexicon_ckb_latn.json").read_text(encoding="utf-8"))["Lexicon"])
    kmr_latn = [w.lower() for w in simple(json.loads(
        (args.klpt_data / "lexicon_kmr_latn.json").read_text(encoding="utf-8"))["Lexicon"])]

    corpora = {}
    corpora["ckb-arab"] = generate(Sampler(rng, sorani, ckb_arab, 0.45,
                                           ["ەکە", "ەکان", "ێک", "ی", "ان", "ەوە", "ەکەی"], 0.35),
                                   LINES_PER_LABEL, comma="،")
    sorani_latn = [arab_to_latin(w) for w in sorani]
    corpora["ckb-latn"] = generate(Sampler(rng, sorani_latn, ckb_latn, 0.45,
                                           ["eke", "ekan", "êk", "î", "an", "ewe", "ekey"], 0.35),
                                   LINES_PER_LABEL)
    kmr_sampler = Sampler(rng, kurmanji, kmr_latn, 0.45, ["ê", "a", "an", "ên", "î", "ek", "ekê"], 0.3)
    corpora["kmr-latn"] = generate(kmr_sampler, LINES_PER_LABEL)
    corpora["kmr-arab"] = generate(kmr_sampler, LINES_PER_LABEL,
                                   transform=lambda s: harmonize(latin_to_arab(s[:-1])) + ".")
    sdh_function = [harmonize(latin_to_arab(w)) for w in SDH_FUNCTION_LATIN]
    corpora["sdh-arab"] = generate(Sampler(rng, sdh_function, ckb_arab, 0.45,
                                           ["ەگە", "ەگان", "یگ", "ەیل", "گەل", "ەیلە", "ی"], 0.45),
                                   LINES_PER_LABEL, comma="،")
    for lang, label, comma in (("ar", "ar-arab", "،"), ("fa", "fa-arab", "،"), ("tr", "tr-latn", ",")):
        words, weights = load_wordfreq(args.wordfreq_data, lang, 6000)
        keep = [i for i, w in enumerate(words) if w.isalpha()]
        sampler = Sampler(rng, [], [words[i] for i in keep], 0.0, weights=weights[keep])
        corpora[label] = generate(sampler, LINES_PER_LABEL, comma=comma)

    OUT.mkdir(parents=True, exist_ok=True)
    for label, lines in sorted(corpora.items()):
        (OUT / f"{label}.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(label, len(lines), lines[0])


if __name__ == "__main__":
    main()
