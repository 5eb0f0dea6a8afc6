"""The language-identification model, its file format and inference.

Model file layout (all integers little-endian)::

    magic        4 bytes   b"KLID"
    version      u32       1
    dim          u32       embedding_dim
    ngram_min    u32
    ngram_max    u32
    epochs       u32
    lr           f64       learning_rate
    buckets      u64       bucket_count
    unigrams     u8        include_word_unigrams
    seed         i64
    scheme       u8        0 = language-only, 1 = language-and-script
    n_labels     u32, then per label: u32 byte length + UTF-8 label string
    n_words      u32, then per word (in row order): u32 byte length + UTF-8
    input rows   u64, cols u32, rows*cols little-endian f32 (row-major)
    output rows  u32, cols u32, rows*cols little-endian f32 (row-major)
"""

from __future__ import annotations

import enum
import io
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Mapping, Sequence

import numpy as np

from ..core import Label
from ..errors import MissingScript, ModelFormatError
from .features import featurize

MAGIC = b"KLID"
FORMAT_VERSION = 1
_HYPER = struct.Struct("<IIIIdQBq")


@dataclass(frozen=True)
class LidHyperparams:
    embedding_dim: int = 64
    ngram_min: int = 2
    ngram_max: int = 6
    epochs: int = 25
    learning_rate: float = 1.0
    bucket_count: int = 2_000_000
    include_word_unigrams: bool = True
    seed: int = 1
    threads: int = 1  # >1 selects the non-deterministic lock-free mode; not stored

    def __post_init__(self):
        if not 1 <= self.ngram_min <= self.ngram_max:
            raise ValueError("need 1 <= ngram_min <= ngram_max")
        if self.embedding_dim < 1:
            raise ValueError("embedding_dim must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if self.bucket_count < 1:
            raise ValueError("bucket_count must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


class LabelScheme(str, enum.Enum):
    LANGUAGE_ONLY = "language-only"
    LANGUAGE_AND_SCRIPT = "language-and-script"

    def __str__(self):
        return self.value

    def accepts(self, label: Label) -> bool:
        return (label.script is not None) == (self is LabelScheme.LANGUAGE_AND_SCRIPT)


_SCHEME_CODES = {LabelScheme.LANGUAGE_ONLY: 0, LabelScheme.LANGUAGE_AND_SCRIPT: 1}


def aggregate_label(label: Label, scheme: LabelScheme | str) -> Label:
    """Map ``label`` onto ``scheme``: drop the script, or require one."""
    scheme = LabelScheme(scheme)
    if scheme is LabelScheme.LANGUAGE_ONLY:
        return Label(label.language)
    if label.script is None:
        raise MissingScript(f"label {label} has no script code")
    return label


@dataclass(frozen=True)
class Prediction:
    ranked: tuple[tuple[Label, float], ...]

    @property
    def label(self) -> Label:
        return self.ranked[0][0]

    @property
    def probability(self) -> float:
        return self.ranked[0][1]


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max()
    e = np.exp(z)
    return e / e.sum()


class LidModel:
    """Averaged hashed-feature embeddings followed by a linear softmax layer."""

    def __init__(
        self,
        hyper: LidHyperparams,
        scheme: LabelScheme | str,
        labels: Sequence[Label],
        input_embeddings: np.ndarray,
        output_weights: np.ndarray,
        word_vocab: Mapping[str, int],
    ):
        self.hyper = hyper
        self.scheme = LabelScheme(scheme)
        self.labels: tuple[Label, ...] = tuple(labels)
        self.input_embeddings = input_embeddings
        self.output_weights = output_weights
        self.word_vocab: dict[str, int] = dict(word_vocab)
        self._check()

    def _check(self):
        if len(set(self.labels)) != len(self.labels) or not self.labels:
            raise ValueError("labels must be distinct and non-empty")
        for label in self.labels:
            if not self.scheme.accepts(label):
                raise ValueError(f"label {label} does not fit scheme {self.scheme}")
        d = self.hyper.embedding_dim
        rows = self.hyper.bucket_count + len(self.word_vocab)
        if self.input_embeddings.shape != (rows, d):
            raise ValueError(f"input embeddings must be {rows}x{d}")
        if self.output_weights.shape != (len(self.labels), d):
            raise ValueError(f"output weights must be {len(self.labels)}x{d}")
        if sorted(self.word_vocab.values()) != list(range(len(self.word_vocab))):
            raise ValueError("word vocabulary rows must be 0..V-1")

    def check_finite(self) -> bool:
        return bool(np.isfinite(self.output_weights).all() and np.isfinite(self.input_embeddings).all())

    # ---------------------------------------------------------------- inference

    def features(self, sentence: str) -> list[int]:
        return featurize(sentence, self.hyper, self.word_vocab)

    def hidden(self, features: Sequence[int]) -> np.ndarray:
        if not features:
            return np.zeros(self.hyper.embedding_dim, dtype=np.float64)
        rows = self.input_embeddings[np.asarray(features, dtype=np.int64)]
        return rows.astype(np.float64).mean(axis=0)

    def score(self, sentence: str) -> np.ndarray:
        """Probability of each label, in model label order."""
        h = self.hidden(self.features(sentence))
        return softmax(self.output_weights.astype(np.float64) @ h)

    def predict(self, sentence: str, k: int = 1) -> Prediction:
        if k < 1:
            raise ValueError("k must be >= 1")
        probs = self.score(sentence)
        order = sorted(range(len(self.labels)), key=lambda i: (-probs[i], i))[:k]
        return Prediction(tuple((self.labels[i], float(probs[i])) for i in order))

    # ------------------------------------------------------------ serialization

    def write(self, sink: BinaryIO) -> None:
        h = self.hyper
        sink.write(MAGIC)
        sink.write(struct.pack("<I", FORMAT_VERSION))
        sink.write(_HYPER.pack(
            h.embedding_dim, h.ngram_min, h.ngram_max, h.epochs, h.learning_rate,
            h.bucket_count, int(h.include_word_unigrams), h.seed,
        ))
        sink.write(struct.pack("<B", _SCHEME_CODES[self.scheme]))
        _write_strings(sink, [lab.serialize() for lab in self.labels])
        words = sorted(self.word_vocab, key=self.word_vocab.__getitem__)
        _write_strings(sink, words)
        rows, cols = self.input_embeddings.shape
        sink.write(struct.pack("<QI", rows, cols))
        sink.write(np.ascontiguousarray(self.input_embeddings, dtype="<f4").tobytes())
        rows, cols = self.output_weights.shape
        sink.write(struct.pack("<II", rows, cols))
        sink.write(np.ascontiguousarray(self.output_weights, dtype="<f4").tobytes())

    def to_bytes(self) -> bytes:
        buf = io.BytesIO()
        self.write(buf)
        return buf.getvalue()

    def save(self, path: str | Path) -> None:
        with open(path, "wb") as fh:
            self.write(fh)

    @classmethod
    def read(cls, source: BinaryIO) -> "LidModel":
        if _read_exact(source, 4) != MAGIC:
            raise ModelFormatError("not a model file (bad magic)")
        (version,) = struct.unpack("<I", _read_exact(source, 4))
        if version != FORMAT_VERSION:
            raise ModelFormatError(f"unsupported model format version {version}")
        dim, nmin, nmax, epochs, lr, buckets, unigrams, seed = _HYPER.unpack(_read_exact(source, _HYPER.size))
        try:
            hyper = LidHyperparams(dim, nmin, nmax, epochs, lr, buckets, bool(unigrams), seed)
        except ValueError as exc:
            raise ModelFormatError(f"invalid hyperparameters: {exc}") from None
        (scheme_code,) = struct.unpack("<B", _read_exact(source, 1))
        schemes = {v: k for k, v in _SCHEME_CODES.items()}
        if scheme_code not in schemes:
            raise ModelFormatError(f"unknown scheme code {scheme_code}")
        labels = [Label.parse(s) for s in _read_strings(source)]
        words = _read_strings(source)
        rows, cols = struct.unpack("<QI", _read_exact(source, 12))
        inp = _read_matrix(source, rows, cols)
        rows, cols = struct.unpack("<II", _read_exact(source, 8))
        out = _read_matrix(source, rows, cols)
        if source.read(1):
            raise ModelFormatError("trailing bytes after model data")
        try:
            return cls(hyper, schemes[scheme_code], labels, inp, out, {w: i for i, w in enumerate(words)})
        except ValueError as exc:
            raise ModelFormatError(str(exc)) from None

    @classmethod
    def from_bytes(cls, data: bytes) -> "LidModel":
        return cls.read(io.BytesIO(data))

    @classmethod
    def load(cls, path: str | Path) -> "LidModel":
        with open(path, "rb") as fh:
            return cls.read(fh)


def _read_exact(source: BinaryIO, n: int) -> bytes:
    data = source.read(n)
    if len(data) != n:
        raise ModelFormatError("truncated model file")
    return data


def _write_strings(sink: BinaryIO, items: Sequence[str]) -> None:
    sink.write(struct.pack("<I", len(items)))
    for item in items:
        raw = item.encode("utf-8")
        sink.write(struct.pack("<I", len(raw)))
        sink.write(raw)


def _read_strings(source: BinaryIO) -> list[str]:
    (count,) = struct.unpack("<I", _read_exact(source, 4))
    items = []
    for _ in range(count):
        (length,) = struct.unpack("<I", _read_exact(source, 4))
        try:
            items.append(_read_exact(source, length).decode("utf-8"))
        except UnicodeDecodeError:
            raise ModelFormatError("invalid UTF-8 in model strings") from None
    return items


def _read_matrix(source: BinaryIO, rows: int, cols: int) -> np.ndarray:
    data = _read_exact(source, rows * cols * 4)
    return np.frombuffer(data, dtype="<f4").astype(np.float32).reshape(rows, cols)
