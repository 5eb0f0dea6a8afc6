"""Hashed character n-gram features.

Each word token ``w`` of a sentence contributes

* its word-unigram row (when ``w`` is in the model vocabulary and unigrams
  are enabled), and
* one row per character n-gram of the padded form ``<w>`` for every length
  from ``ngram_min`` to ``ngram_max`` (counted in code points).  An n-gram
  is hashed with 64-bit FNV-1a over its UTF-8 bytes; the row is
  ``len(word_vocab) + hash % bucket_count``.

Repeated features keep their multiplicity.  N-grams never span two words.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping

from ..stats import TokenKind, tokenize

FNV_OFFSET_BASIS = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK = (1 << 64) - 1
BOW, EOW = "<", ">"


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a hash of ``data``."""
    h = FNV_OFFSET_BASIS
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK
    return h


def char_ngrams(word: str, ngram_min: int, ngram_max: int) -> list[str]:
    """All n-grams of ``<word>`` with lengths ngram_min..ngram_max."""
    padded = BOW + word + EOW
    grams = []
    for n in range(ngram_min, ngram_max + 1):
        grams.extend(padded[i:i + n] for i in range(len(padded) - n + 1))
    return grams


@lru_cache(maxsize=1 << 18)
def _hashed_ngrams(word: str, ngram_min: int, ngram_max: int, bucket_count: int) -> tuple[int, ...]:
    return tuple(
        fnv1a_64(g.encode("utf-8")) % bucket_count for g in char_ngrams(word, ngram_min, ngram_max)
    )


def sentence_words(sentence: str) -> list[str]:
    return [t.surface for t in tokenize(sentence) if t.kind is TokenKind.WORD]


def featurize(sentence: str, hyper, word_vocab: Mapping[str, int]) -> list[int]:
    """Feature row indices of ``sentence`` (a multiset, as a list)."""
    offset = len(word_vocab)
    features: list[int] = []
    for word in sentence_words(sentence):
        if hyper.include_word_unigrams:
            row = word_vocab.get(word)
            if row is not None:
                features.append(row)
        hashed = _hashed_ngrams(word, hyper.ngram_min, hyper.ngram_max, hyper.bucket_count)
        features.extend(offset + h for h in hashed)
    return features
