"""Independent reference implementations used as test oracles for the LID model."""

import math
from collections import Counter

import numpy as np

LD = np.longdouble

# Published FNV-1a 64-bit test vectors.
FNV1A64_VECTORS = {
    b"": 0xCBF29CE484222325,
    b"a": 0xAF63DC4C8601EC8C,
    b"foobar": 0x85944171F73967E8,
}


def ref_fnv1a64(data: bytes) -> int:
    """FNV-1a written from the definition with unbounded integers."""
    h = 14695981039346656037
    for b in data:
        h = ((h ^ b) * 1099511628211) % 2**64
    return h


def brute_ngrams(word: str, nmin: int, nmax: int) -> Counter:
    """Every substring of ``<word>`` whose length lies in [nmin, nmax], by start position."""
    padded = "<" + word + ">"
    grams = Counter()
    for start in range(len(padded)):
        for stop in range(start + 1, len(padded) + 1):
            if nmin <= stop - start <= nmax:
                grams[padded[start:stop]] += 1
    return grams


def ref_features(words, nmin, nmax, buckets, vocab, unigrams=True) -> Counter:
    out = Counter()
    for w in words:
        if unigrams and w in vocab:
            out[vocab[w]] += 1
        for g, n in brute_ngrams(w, nmin, nmax).items():
            out[len(vocab) + ref_fnv1a64(g.encode("utf-8")) % buckets] += n
    return out


def ref_probabilities(embeddings, weights, features) -> list[float]:
    """Mean embedding, logits and softmax with plain Python floats."""
    d = len(embeddings[0])
    if features:
        h = [math.fsum(float(embeddings[f][j]) for f in features) / len(features) for j in range(d)]
    else:
        h = [0.0] * d
    logits = [math.fsum(float(w[j]) * h[j] for j in range(d)) for w in weights]
    m = max(logits)
    exps = [math.exp(z - m) for z in logits]
    total = math.fsum(exps)
    return [e / total for e in exps]


def loss_extended(rows, counts, weights, target):
    """Softmax NLL in extended precision."""
    c = counts.astype(LD)
    h = (c / c.sum()) @ rows
    z = weights @ h
    m = z.max()
    return m + np.log(np.exp(z - m).sum()) - z[target]


def central_difference(f, x, step):
    """Central finite differences of ``f()`` w.r.t. every entry of ``x`` (modified in place)."""
    grad = np.empty(x.shape, dtype=LD)
    for i in np.ndindex(x.shape):
        orig = x[i]
        x[i] = orig + step
        up = f()
        x[i] = orig - step
        down = f()
        x[i] = orig
        grad[i] = (up - down) / (2 * step)
    return grad


def numeric_gradients(rows, counts, weights, target, step=1e-4):
    """Richardson-extrapolated central differences, evaluated in extended precision.

    Returns the gradient w.r.t. ``rows`` and ``weights`` flattened into one vector.
    """
    R = rows.astype(LD)
    W = weights.astype(LD)
    f = lambda: loss_extended(R, counts, W, target)  # noqa: E731
    h = LD(step)
    parts = []
    for x in (R, W):
        parts.append(((4 * central_difference(f, x, h / 2) - central_difference(f, x, h)) / 3).ravel())
    return np.concatenate(parts)


def random_tiny_instance(rng):
    """2-5 labels, 10-100 features (with repeats), 8-dim embeddings."""
    n_labels = int(rng.integers(2, 6))
    n_features = int(rng.integers(10, 101))
    idx, counts = np.unique(rng.integers(0, 64, size=n_features), return_counts=True)
    rows = rng.uniform(-1, 1, (len(idx), 8))
    weights = rng.uniform(-1, 1, (n_labels, 8))
    return rows, counts, weights, int(rng.integers(n_labels))


def max_relative_error(analytic, numeric) -> float:
    a = np.asarray(analytic, dtype=LD)
    n = np.asarray(numeric, dtype=LD)
    return float((np.abs(a - n) / np.maximum(np.abs(a), np.abs(n))).max())
