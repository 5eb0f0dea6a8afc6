import io
import random
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kurdcorpus.core import Label, LabeledSentence
from kurdcorpus.errors import (
    DegenerateLabels, MissingScript, ModelFormatError, NonFiniteLoss, SchemeMismatch, UnparseableLabel,
)
from kurdcorpus.lid import (
    LabelScheme, LidHyperparams, LidModel, aggregate_label, char_ngrams, evaluate, evaluate_external, featurize,
    fnv1a_64, report_from_pairs, train,
)
from kurdcorpus.lid.train import loss_and_gradients, parameter_gradients, training_accuracy
from lid_oracles import (
    FNV1A64_VECTORS, brute_ngrams, max_relative_error, numeric_gradients, random_tiny_instance, ref_features,
    ref_fnv1a64, ref_probabilities,
)

L = Label.parse
TINY = LidHyperparams(embedding_dim=8, bucket_count=1000, epochs=5, seed=3)


# ---------------------------------------------------------------- features

@pytest.mark.parametrize("data, expected", sorted(FNV1A64_VECTORS.items()))
def test_fnv_vectors(data, expected):
    assert fnv1a_64(data) == expected


@given(st.binary(max_size=40))
def test_fnv_matches_reference(data):
    assert fnv1a_64(data) == ref_fnv1a64(data)


def test_ngrams_example():
    assert Counter(char_ngrams("ab", 2, 3)) == Counter(["<a", "ab", "b>", "<ab", "ab>"])


@given(st.text(min_size=1, max_size=10), st.integers(1, 4), st.integers(0, 4))
def test_ngrams_match_brute_force(word, nmin, extra):
    assert Counter(char_ngrams(word, nmin, nmin + extra)) == brute_ngrams(word, nmin, nmin + extra)


def test_featurize_empty():
    assert featurize("", TINY, {}) == []
    assert featurize("... 123", TINY, {}) == []


def test_featurize_fixture_sentence():
    sentence = "ez diçim, bo ماڵەوە!"
    vocab = {"bo": 0, "ez": 1}
    hyper = LidHyperparams(bucket_count=997, ngram_min=2, ngram_max=6)
    expected = ref_features(["ez", "diçim", "bo", "ماڵەوە"], 2, 6, 997, vocab)
    assert Counter(featurize(sentence, hyper, vocab)) == expected


def test_featurize_without_unigrams():
    hyper = LidHyperparams(bucket_count=97, include_word_unigrams=False)
    assert Counter(featurize("ez", hyper, {"ez": 0})) == ref_features(["ez"], 2, 6, 97, {"ez": 0}, unigrams=False)


@given(st.lists(st.sampled_from(["ez", "tu", "ew", "ماڵ", "کورد", "û"]), min_size=1, max_size=8),
       st.randoms(use_true_random=False))
def test_featurize_permutation_invariant(words, rnd):
    shuffled = list(words)
    rnd.shuffle(shuffled)
    vocab = {"ez": 0, "ماڵ": 1}
    assert Counter(featurize(" ".join(words), TINY, vocab)) == Counter(featurize(" ".join(shuffled), TINY, vocab))


# ---------------------------------------------------------------- model

def random_model(rng, n_labels=3, buckets=10, dim=4, vocab=("ez", "tu"), scheme=LabelScheme.LANGUAGE_AND_SCRIPT):
    names = ["ar-arab", "ckb-arab", "ckb-latn", "fa-arab", "kmr-latn", "tr-latn"][:n_labels]
    if scheme is LabelScheme.LANGUAGE_ONLY:
        names = ["ar", "ckb", "fa", "kmr", "sdh", "tr"][:n_labels]
    hyper = LidHyperparams(embedding_dim=dim, bucket_count=buckets, ngram_min=1, ngram_max=3)
    word_vocab = {w: i for i, w in enumerate(vocab)}
    E = rng.standard_normal((buckets + len(vocab), dim)).astype(np.float32)
    W = rng.standard_normal((n_labels, dim)).astype(np.float32)
    return LidModel(hyper, scheme, [L(n) for n in names], E, W, word_vocab)


def test_zero_weights_uniform():
    model = random_model(np.random.default_rng(0), n_labels=4)
    model.output_weights[:] = 0
    probs = model.score("ez diçim")
    assert np.allclose(probs, 0.25, atol=0, rtol=1e-15)
    # ties are broken by model label order
    assert [lab for lab, _ in model.predict("ez", k=4).ranked] == list(model.labels)


def test_single_label_model():
    model = random_model(np.random.default_rng(0), n_labels=1)
    pred = model.predict("hello")
    assert pred.label == model.labels[0] and pred.probability == 1.0


def test_scores_match_reference():
    rng = np.random.default_rng(42)
    model = random_model(rng, n_labels=3, buckets=10)
    sentence = "ez tu diçin"
    feats = model.features(sentence)
    expected = ref_probabilities(model.input_embeddings.tolist(), model.output_weights.tolist(), feats)
    got = model.score(sentence)
    assert np.max(np.abs(got - np.array(expected))) < 1e-12
    assert model.predict(sentence).label == model.labels[int(np.argmax(expected))]


def test_empty_sentence_gives_uniform():
    model = random_model(np.random.default_rng(1), n_labels=3)
    assert np.allclose(model.score("!!!"), 1 / 3)


def test_predict_k_validation():
    with pytest.raises(ValueError):
        random_model(np.random.default_rng(0)).predict("x", k=0)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1), st.floats(-5, 5), st.text(max_size=20))
def test_shift_invariance(seed, shift, sentence):
    model = random_model(np.random.default_rng(seed))
    before = [lab for lab, _ in model.predict(sentence, k=3).ranked]
    probs = model.score(sentence)
    # adding the same vector to every output row shifts all logits equally
    model.output_weights += np.float32(shift) * np.ones_like(model.output_weights[0])
    h = model.hidden(model.features(sentence))
    shifted = model.output_weights.astype(np.float64) @ h
    assert np.allclose(model.score(sentence), probs, atol=1e-6)
    assert np.ptp(shifted - model.output_weights.astype(np.float64) @ h) == 0
    if np.ptp(probs) > 1e-6:
        assert [lab for lab, _ in model.predict(sentence, k=3).ranked][0] == before[0]


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.text(max_size=30))
def test_probabilities_normalized(seed, n_labels, sentence):
    model = random_model(np.random.default_rng(seed), n_labels=min(n_labels, 6))
    probs = [p for _, p in model.predict(sentence, k=len(model.labels)).ranked]
    assert abs(sum(probs) - 1) <= 1e-6
    assert all(0 <= p <= 1 for p in probs)
    assert probs == sorted(probs, reverse=True)


def test_model_validation():
    rng = np.random.default_rng(0)
    model = random_model(rng)
    with pytest.raises(ValueError):
        LidModel(model.hyper, LabelScheme.LANGUAGE_ONLY, model.labels, model.input_embeddings,
                 model.output_weights, model.word_vocab)
    with pytest.raises(ValueError):
        LidModel(model.hyper, model.scheme, model.labels, model.input_embeddings[:-1], model.output_weights,
                 model.word_vocab)


def test_hyperparam_validation():
    for kwargs in ({"ngram_min": 3, "ngram_max": 2}, {"ngram_min": 0}, {"embedding_dim": 0},
                   {"learning_rate": 0.0}, {"bucket_count": 0}):
        with pytest.raises(ValueError):
            LidHyperparams(**kwargs)


# ---------------------------------------------------------------- serialization

def test_model_bytes_round_trip(tmp_path):
    model = random_model(np.random.default_rng(5), vocab=("ez", "tu", "ماڵ"))
    data = model.to_bytes()
    again = LidModel.from_bytes(data)
    assert again.to_bytes() == data
    assert again.labels == model.labels and again.word_vocab == model.word_vocab
    assert again.hyper == model.hyper and again.scheme is model.scheme
    assert np.array_equal(again.input_embeddings, model.input_embeddings)
    path = tmp_path / "m.bin"
    model.save(path)
    assert path.read_bytes() == data
    assert data[:4] == b"KLID"


def test_model_file_errors():
    data = random_model(np.random.default_rng(5)).to_bytes()
    for bad in (b"", b"XXXX" + data[4:], data[:4] + b"\x09\x00\x00\x00" + data[8:], data[:-3], data + b"\0"):
        with pytest.raises(ModelFormatError):
            LidModel.from_bytes(bad)


floats32 = st.floats(width=32, allow_nan=False, allow_infinity=False)


@settings(max_examples=50)
@given(st.integers(1, 4), st.integers(1, 5), st.lists(st.text(min_size=1, max_size=6), max_size=4, unique=True),
       st.data())
def test_model_round_trip_property(dim, buckets, vocab, data):
    n_labels = data.draw(st.integers(1, 4))
    rows = buckets + len(vocab)
    E = np.array(data.draw(st.lists(floats32, min_size=rows * dim, max_size=rows * dim)),
                 dtype=np.float32).reshape(rows, dim)
    W = np.array(data.draw(st.lists(floats32, min_size=n_labels * dim, max_size=n_labels * dim)),
                 dtype=np.float32).reshape(n_labels, dim)
    hyper = LidHyperparams(embedding_dim=dim, bucket_count=buckets, seed=data.draw(st.integers(0, 2**40)),
                           learning_rate=data.draw(st.floats(1e-3, 10)))
    labels = [L(n) for n in ["ar-arab", "ckb-arab", "fa-arab", "tr-latn"][:n_labels]]
    model = LidModel(hyper, LabelScheme.LANGUAGE_AND_SCRIPT, labels, E, W, {w: i for i, w in enumerate(vocab)})
    blob = model.to_bytes()
    again = LidModel.from_bytes(blob)
    assert again.to_bytes() == blob
    assert again.input_embeddings.tobytes() == E.tobytes()


# ---------------------------------------------------------------- gradients

def test_gradients_match_finite_differences():
    rng = np.random.default_rng(2024)
    worst64 = worst32 = 0.0
    for _ in range(10):
        rows, counts, weights, target = random_tiny_instance(rng)
        _, g_rows, g_w = loss_and_gradients(rows, counts, weights, target)
        worst64 = max(worst64, max_relative_error(np.concatenate([g_rows.ravel(), g_w.ravel()]),
                                                  numeric_gradients(rows, counts, weights, target)))
        r32, w32 = rows.astype(np.float32), weights.astype(np.float32)
        _, g_rows, g_w = parameter_gradients(r32, counts, w32, target)
        assert g_rows.dtype == np.float32
        worst32 = max(worst32, max_relative_error(np.concatenate([g_rows.ravel(), g_w.ravel()]),
                                                  numeric_gradients(r32, counts, w32, target)))
    assert worst64 < 1e-8
    assert worst32 < 1e-4


def test_loss_value():
    rows = np.array([[1.0, 0.0], [0.0, 1.0]])
    counts = np.array([1, 1])
    weights = np.array([[1.0, 0.0], [0.0, 0.0]])
    loss, _, _ = loss_and_gradients(rows, counts, weights, 0)
    # h = (0.5, 0.5); logits = (0.5, 0); loss = log(1 + e^-0.5)
    assert abs(loss - np.log1p(np.exp(-0.5))) < 1e-15


# ---------------------------------------------------------------- training

def _separable(n=50):
    a = [LabeledSentence(" ".join("a" * random.Random(i).randint(3, 8) for _ in range(3)), L("ckb-arab"))
         for i in range(n)]
    z = [LabeledSentence(" ".join("z" * random.Random(i + n).randint(3, 8) for _ in range(3)), L("kmr-latn"))
         for i in range(n)]
    return a + z


def test_train_separable():
    data = _separable()
    result = train(data, LidHyperparams(embedding_dim=16, bucket_count=5000, epochs=25, seed=1))
    assert training_accuracy(result.model, data) == 1.0
    assert np.isfinite(result.final_epoch_loss)
    assert result.steps == 25 * len(data)


def test_train_deterministic():
    data = _separable(20)
    a = train(data, TINY).model.to_bytes()
    b = train(data, TINY).model.to_bytes()
    c = train(data, LidHyperparams(embedding_dim=8, bucket_count=1000, epochs=5, seed=4)).model.to_bytes()
    assert a == b and a != c


def test_train_initialization():
    data = _separable(5)
    model = train(data, LidHyperparams(embedding_dim=8, bucket_count=500, epochs=1, learning_rate=1e-9)).model
    assert np.all(np.abs(model.input_embeddings) <= 1 / 8)
    assert model.input_embeddings.dtype == np.float32
    assert np.all(np.abs(model.output_weights) < 1e-6)
    assert model.word_vocab == {w: i for i, w in enumerate(sorted({w for s in data for w in s.text.split()}))}


def test_train_errors():
    with pytest.raises(DegenerateLabels):
        train([LabeledSentence("a", L("ckb-arab"))], TINY)
    with pytest.raises(DegenerateLabels):
        train([], TINY)
    with pytest.raises(SchemeMismatch):
        train([LabeledSentence("a", L("ckb")), LabeledSentence("b", L("kmr"))], TINY)
    with pytest.raises(SchemeMismatch):
        train(_separable(3), TINY, LabelScheme.LANGUAGE_ONLY)


def test_train_divergence_reports_step():
    hyper = LidHyperparams(embedding_dim=8, bucket_count=100, epochs=3, learning_rate=1e38)
    contradictory = [LabeledSentence("ab cd", L("ckb-arab")), LabeledSentence("ab cd", L("kmr-latn"))] * 5
    with pytest.raises(NonFiniteLoss) as err:
        train(contradictory, hyper)
    assert 0 <= err.value.step < 30


def test_train_parallel_mode():
    data = _separable(20)
    hyper = LidHyperparams(embedding_dim=8, bucket_count=1000, epochs=10, threads=3)
    result = train(data, hyper)
    assert result.model.check_finite() and np.isfinite(result.final_epoch_loss)
    assert training_accuracy(result.model, data) > 0.9


def test_train_language_only():
    data = [LabeledSentence(s.text, aggregate_label(s.label, LabelScheme.LANGUAGE_ONLY)) for s in _separable(10)]
    model = train(data, TINY, LabelScheme.LANGUAGE_ONLY).model
    assert model.labels == (L("ckb"), L("kmr"))


# ---------------------------------------------------------------- labels

def test_aggregate_label():
    assert aggregate_label(L("ckb-arab"), LabelScheme.LANGUAGE_ONLY) == L("ckb")
    assert aggregate_label(L("ckb"), LabelScheme.LANGUAGE_ONLY) == L("ckb")
    assert aggregate_label(L("ckb-arab"), LabelScheme.LANGUAGE_AND_SCRIPT) == L("ckb-arab")
    with pytest.raises(MissingScript):
        aggregate_label(L("ckb"), LabelScheme.LANGUAGE_AND_SCRIPT)


def test_script_aware_label_set_collapses_to_eight_languages():
    script_aware = ["kmr-latn", "kmr-arab", "ckb-arab", "ckb-latn", "sdh-arab", "hac-arab", "zza-latn",
                    "zza-latn-wiki", "ar-arab", "fa-arab", "tr-latn"]
    collapsed = {aggregate_label(L(x), LabelScheme.LANGUAGE_ONLY) for x in script_aware}
    assert len(script_aware) == 11 and len(collapsed) == 8


# ---------------------------------------------------------------- evaluation

def _stub_model():
    """One-word sentences: alpha -> ckb-arab, beta -> kmr-latn, gamma -> sdh-arab."""
    labels = [L("ckb-arab"), L("kmr-latn"), L("sdh-arab")]
    vocab = {"alpha": 0, "beta": 1, "gamma": 2}
    hyper = LidHyperparams(embedding_dim=3, bucket_count=1, ngram_min=2, ngram_max=2)
    E = np.zeros((4, 3), dtype=np.float32)
    E[:3] = np.eye(3, dtype=np.float32) * 30
    W = np.eye(3, dtype=np.float32)
    return LidModel(hyper, LabelScheme.LANGUAGE_AND_SCRIPT, labels, E, W, vocab)


STUB_TEST = [
    ("ckb-arab", "alpha"), ("ckb-arab", "alpha"), ("ckb-arab", "beta"), ("ckb-arab", "gamma"),
    ("kmr-latn", "beta"), ("kmr-latn", "beta"), ("kmr-latn", "alpha"),
    ("sdh-arab", "gamma"), ("sdh-arab", "gamma"), ("sdh-arab", "beta"),
]


def test_evaluate_stub_fixture():
    model = _stub_model()
    report = evaluate(model, [LabeledSentence(t, L(lab)) for lab, t in STUB_TEST])
    # hand-computed confusion matrix (rows: reference, columns: prediction)
    assert report.confusion.tolist() == [[2, 1, 1], [1, 2, 0], [0, 1, 2]]
    p = [report.per_class[lab].precision for lab in model.labels]
    r = [report.per_class[lab].recall for lab in model.labels]
    f = [report.per_class[lab].f1 for lab in model.labels]
    assert p == pytest.approx([2 / 3, 1 / 2, 2 / 3], abs=1e-15)
    assert r == pytest.approx([1 / 2, 2 / 3, 2 / 3], abs=1e-15)
    assert f == pytest.approx([4 / 7, 4 / 7, 2 / 3], abs=1e-15)
    assert report.macro_precision == pytest.approx(float(Fraction(11, 18)), abs=1e-15)
    assert report.macro_recall == pytest.approx(float(Fraction(11, 18)), abs=1e-15)
    assert report.macro_f1 == pytest.approx(float(Fraction(38, 63)), abs=1e-15)
    assert report.accuracy == 0.6
    assert report.confusion.sum(axis=1).tolist() == [4, 3, 3]


def test_evaluate_perfect():
    model = _stub_model()
    test = [LabeledSentence(w, lab) for lab, w in zip(model.labels, ["alpha", "beta", "gamma"]) for _ in range(3)]
    report = evaluate(model, test)
    assert report.macro_precision == report.macro_recall == report.macro_f1 == 1.0
    assert (report.confusion == np.diag([3, 3, 3])).all()


def test_evaluate_always_one_class():
    report = report_from_pairs([(L("ckb"), L("ckb"))] * 5 + [(L("kmr"), L("ckb"))] * 5, [L("ckb"), L("kmr")])
    assert report.macro_recall == 0.5 and report.macro_precision == 0.25


def test_absent_class_flagged():
    model = _stub_model()
    report = evaluate(model, [LabeledSentence("alpha", L("ckb-arab")), LabeledSentence("beta", L("kmr-latn"))])
    assert report.absent == (L("sdh-arab"),)
    assert report.per_class[L("sdh-arab")].recall == 0.0
    assert report.macro_recall == pytest.approx(2 / 3)
    assert "absent" in report.to_text()


def test_evaluate_errors():
    model = _stub_model()
    with pytest.raises(SchemeMismatch):
        evaluate(model, [LabeledSentence("alpha", L("ckb"))])
    with pytest.raises(SchemeMismatch):
        evaluate(model, [LabeledSentence("alpha", L("fa-arab"))])
    with pytest.raises(ValueError):
        evaluate(model, [])


def test_evaluate_external_fixture():
    report = evaluate_external([("ckb", "ckb"), ("ckb", "kmr"), ("kmr", "kmr"), ("sdh", "ckb")])
    assert report.labels == (L("ckb"), L("kmr"), L("sdh"))
    assert report.confusion.tolist() == [[1, 1, 0], [0, 1, 0], [1, 0, 0]]
    assert report.macro_precision == pytest.approx(1 / 3, abs=1e-15)
    assert report.macro_recall == pytest.approx(1 / 2, abs=1e-15)
    assert report.macro_f1 == pytest.approx(7 / 18, abs=1e-15)


def test_evaluate_external_all_correct():
    assert evaluate_external([("ckb-arab", "ckb-arab"), ("fa", "fa")]).macro_f1 == 1.0


def test_evaluate_external_bad_label():
    with pytest.raises(UnparseableLabel) as err:
        evaluate_external([("ckb", "ckb"), ("ckb", "english")])
    assert err.value.row == 1


def test_confusion_csv():
    report = evaluate_external([("ckb", "kmr"), ("kmr", "kmr")])
    assert report.confusion_csv() == "reference\\predicted,ckb,kmr\nckb,0,1\nkmr,0,1\n"


@given(st.lists(st.tuples(st.sampled_from(["ckb", "kmr", "sdh", "fa"]), st.sampled_from(["ckb", "kmr", "sdh", "fa"])),
                min_size=1, max_size=40))
def test_report_invariants(pairs):
    report = evaluate_external(pairs)
    k = len(report.labels)
    for lab in report.labels:
        s = report.per_class[lab]
        assert 0 <= s.precision <= 1 and 0 <= s.recall <= 1
        expected_f1 = 2 * s.precision * s.recall / (s.precision + s.recall) if s.precision + s.recall else 0.0
        assert s.f1 == pytest.approx(expected_f1)
    assert report.macro_f1 == pytest.approx(sum(s.f1 for s in report.per_class.values()) / k)
    refs = Counter(r for r, _ in pairs)
    assert [int(x) for x in report.confusion.sum(axis=1)] == [refs[lab.serialize()] for lab in report.labels]


def test_scheme_consistency():
    data = _separable(15)
    model = train(data, TINY).model
    test = data[::3]
    pairs = [(aggregate_label(s.label, "language-only"), aggregate_label(model.predict(s.text).label, "language-only"))
             for s in test]
    labels = sorted({aggregate_label(lab, "language-only") for lab in model.labels}, key=Label.sort_key)
    report = report_from_pairs(pairs, labels)
    assert report.total == len(test)


def test_report_record_form():
    report = evaluate_external([("ckb", "ckb"), ("kmr", "ckb")])
    rec = report.to_record()
    assert rec["labels"] == ["ckb", "kmr"] and rec["confusion"] == [[1, 0], [1, 0]]
    buf = io.StringIO(report.to_text())
    assert buf.getvalue().splitlines()[-1].startswith("macro")
