"""Stochastic-gradient training of :class:`LidModel`.

One sentence per step.  For a sentence with feature multiset ``F`` (size
``n``) and gold label ``y``::

    h = (1/n) * sum_{f in F} E[f]          (mean embedding)
    p = softmax(W h)
    loss = -log p[y]
    dL/dW      = (p - e_y) h^T
    dL/dE[f]   = (c_f / n) * W^T (p - e_y)   (c_f = multiplicity of f)

The learning rate decays linearly from ``learning_rate`` to 0 over all
steps; the example order is reshuffled every epoch from the seeded Philox
stream.  Embeddings start uniform in [-1/dim, 1/dim], output weights at 0.
Parameters are stored as float32; each step is computed in float64 and the
update is rounded back to float32.
"""

from __future__ import annotations

import logging
import math
import threading
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import Label, LabeledSentence
from ..errors import DegenerateLabels, NonFiniteLoss, SchemeMismatch
from ..rng import make_rng
from .features import featurize, sentence_words
from .model import LabelScheme, LidHyperparams, LidModel

log = logging.getLogger(__name__)


def loss_and_gradients(
    rows: np.ndarray, counts: np.ndarray, output_weights: np.ndarray, target: int
) -> tuple[float, np.ndarray, np.ndarray]:
    """Softmax negative log-likelihood of one example and its gradients.

    ``rows`` holds the distinct input-embedding rows touched by the example
    and ``counts`` their multiplicities.  Returns ``(loss, grad_rows,
    grad_output)`` computed in the dtype of the inputs.
    """
    dtype = np.result_type(rows, output_weights)
    counts = counts.astype(dtype)
    n = counts.sum()
    weights = counts / n
    h = weights @ rows
    logits = output_weights @ h
    z = logits - logits.max()
    log_norm = np.log(np.exp(z).sum())
    p = np.exp(z - log_norm)
    loss = float(log_norm - z[target])
    g = p.copy()
    g[target] -= 1
    grad_output = np.outer(g, h)
    grad_rows = np.outer(weights, output_weights.T @ g)
    return loss, grad_rows, grad_output


def example_loss(rows: np.ndarray, counts: np.ndarray, output_weights: np.ndarray, target: int) -> float:
    """The loss alone (used by finite-difference checks)."""
    counts = counts.astype(np.result_type(rows, output_weights))
    h = (counts / counts.sum()) @ rows
    logits = output_weights @ h
    m = logits.max()
    return float(m + np.log(np.exp(logits - m).sum()) - logits[target])


def parameter_gradients(
    rows: np.ndarray, counts: np.ndarray, output_weights: np.ndarray, target: int
) -> tuple[float, np.ndarray, np.ndarray]:
    """Gradients exactly as a training step produces them.

    The step is computed in float64 whatever the parameter dtype and the
    gradients are rounded back to the parameter dtype.
    """
    loss, grad_rows, grad_out = loss_and_gradients(
        rows.astype(np.float64), counts, output_weights.astype(np.float64), target
    )
    return loss, grad_rows.astype(rows.dtype), grad_out.astype(output_weights.dtype)


@dataclass(frozen=True)
class TrainResult:
    model: LidModel
    final_epoch_loss: float
    steps: int


def aggregate_dataset(sentences: Sequence[LabeledSentence], scheme: LabelScheme | str) -> list[LabeledSentence]:
    """Relabel sentences for ``scheme`` (drops scripts for language-only)."""
    from .model import aggregate_label

    scheme = LabelScheme(scheme)
    return [LabeledSentence(s.text, aggregate_label(s.label, scheme)) for s in sentences]


def _prepare(trainset, hyper, word_vocab):
    examples = []
    for sentence in trainset:
        feats = featurize(sentence.text, hyper, word_vocab)
        if feats:
            idx, counts = np.unique(np.asarray(feats, dtype=np.int64), return_counts=True)
        else:
            idx, counts = np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        examples.append((idx, counts))
    return examples


def _step(model: LidModel, idx, counts, target: int, lr: float) -> float:
    E, W = model.input_embeddings, model.output_weights
    if idx.size == 0:
        # empty feature set: h = 0, so no parameter receives gradient
        return math.log(len(model.labels))
    # divergence is reported by the caller through the returned loss
    with np.errstate(over="ignore", invalid="ignore"):
        loss, grad_rows, grad_out = loss_and_gradients(E[idx].astype(np.float64), counts, W.astype(np.float64), target)
        W -= (lr * grad_out).astype(np.float32)
        E[idx] -= (lr * grad_rows).astype(np.float32)
    return loss


def train(
    trainset: Sequence[LabeledSentence],
    hyper: LidHyperparams | None = None,
    scheme: LabelScheme | str = LabelScheme.LANGUAGE_AND_SCRIPT,
) -> TrainResult:
    """Train a model; see the module docstring for the objective."""
    hyper = hyper or LidHyperparams()
    scheme = LabelScheme(scheme)
    if not trainset:
        raise DegenerateLabels("training set is empty")
    for i, s in enumerate(trainset):
        if not scheme.accepts(s.label):
            raise SchemeMismatch(f"training sentence {i} has label {s.label}, which does not fit {scheme}")
    labels = sorted({s.label for s in trainset}, key=Label.sort_key)
    if len(labels) < 2:
        raise DegenerateLabels(f"need at least 2 distinct labels, got {len(labels)}")
    label_index = {lab: i for i, lab in enumerate(labels)}

    vocab_words = sorted({w for s in trainset for w in sentence_words(s.text)}) if hyper.include_word_unigrams else []
    word_vocab = {w: i for i, w in enumerate(vocab_words)}

    rng = make_rng(hyper.seed)
    d = hyper.embedding_dim
    E = np.empty((len(word_vocab) + hyper.bucket_count, d), dtype=np.float32)
    # fill in chunks to avoid a float64 temporary of the full matrix
    chunk = 1 << 16
    for start in range(0, E.shape[0], chunk):
        block = E[start:start + chunk]
        rng.random(out=block, dtype=np.float32)
        block *= np.float32(2.0 / d)
        block -= np.float32(1.0 / d)
    W = np.zeros((len(labels), d), dtype=np.float32)
    model = LidModel(hyper, scheme, labels, E, W, word_vocab)

    examples = _prepare(trainset, hyper, word_vocab)
    targets = np.array([label_index[s.label] for s in trainset], dtype=np.int64)
    total = hyper.epochs * len(examples)
    if hyper.threads > 1:
        final = _train_parallel(model, examples, targets, rng, total)
    else:
        final = _train_serial(model, examples, targets, rng, total)
    log.info("trained %d labels on %d sentences; final-epoch loss %.6f", len(labels), len(examples), final)
    return TrainResult(model, final, total)


def _lr_at(hyper: LidHyperparams, step: int, total: int) -> float:
    return hyper.learning_rate * (1.0 - step / total)


def _train_serial(model, examples, targets, rng, total) -> float:
    hyper = model.hyper
    step = 0
    epoch_loss = 0.0
    for epoch in range(hyper.epochs):
        order = rng.permutation(len(examples))
        epoch_loss = 0.0
        for i in order:
            idx, counts = examples[i]
            loss = _step(model, idx, counts, int(targets[i]), _lr_at(hyper, step, total))
            if not math.isfinite(loss):
                raise NonFiniteLoss(step, loss)
            epoch_loss += loss
            step += 1
        epoch_loss /= len(examples)
        log.info("epoch %d mean loss %.6f", epoch + 1, epoch_loss)
    if not model.check_finite():
        raise NonFiniteLoss(step, float("nan"))
    return epoch_loss


def _train_parallel(model, examples, targets, rng, total) -> float:
    """Lock-free concurrent updates (results vary from run to run)."""
    hyper = model.hyper
    lock = threading.Lock()
    state = {"step": 0, "loss": 0.0, "error": None}

    def worker(chunk):
        for i in chunk:
            if state["error"] is not None:
                return
            step = state["step"]
            idx, counts = examples[i]
            loss = _step(model, idx, counts, int(targets[i]), _lr_at(hyper, min(step, total - 1), total))
            with lock:  # only the counters are synchronised, never the parameters
                state["step"] += 1
                state["loss"] += loss
                if not math.isfinite(loss):
                    state["error"] = NonFiniteLoss(step, loss)

    for _ in range(hyper.epochs):
        order = rng.permutation(len(examples))
        state["loss"] = 0.0
        threads = [threading.Thread(target=worker, args=(order[t::hyper.threads],)) for t in range(hyper.threads)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        if state["error"] is not None:
            raise state["error"]
    return state["loss"] / len(examples)


def training_accuracy(model: LidModel, trainset: Sequence[LabeledSentence]) -> float:
    hits = Counter(model.predict(s.text).label == s.label for s in trainset)
    return hits[True] / len(trainset)
