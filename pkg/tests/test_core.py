import io

import pytest
from hypothesis import given, strategies as st

from kurdcorpus.core import (
    Document, Label, LabeledSentence, LanguageCode, ScriptCode, build_lid_dataset, encode_record, read_corpus,
    read_corpus_lenient, read_dataset, write_corpus, write_dataset,
)
from kurdcorpus.errors import InsufficientData, LabelError, MalformedRecord
from kurdcorpus.extract import extract_article
from kurdcorpus.errors import EmptyExtraction


# ---------------------------------------------------------------- labels

def test_language_code_closed_set():
    assert {c.value for c in LanguageCode} == {"kmr", "ckb", "sdh", "hac", "zza", "lki", "ar", "fa", "tr"}
    with pytest.raises(LabelError):
        LanguageCode.parse("en")


def test_script_code_closed_set():
    assert {c.value for c in ScriptCode} == {"arab", "arab-fa", "latn", "latn-wiki", "unknown"}


def test_unknown_script_is_not_a_label():
    with pytest.raises(LabelError):
        Label(LanguageCode.CKB, ScriptCode.UNKNOWN)


@pytest.mark.parametrize("text, expected", [
    ("ckb-arab", Label(LanguageCode.CKB, ScriptCode.ARAB)),
    ("ckbarab", Label(LanguageCode.CKB, ScriptCode.ARAB)),
    ("ckblatn", Label(LanguageCode.CKB, ScriptCode.LATN)),
    ("zza-latn-wiki", Label(LanguageCode.ZZA, ScriptCode.LATN_WIKI)),
    ("sdh-arab-fa", Label(LanguageCode.SDH, ScriptCode.ARAB_FA)),
    ("tr", Label(LanguageCode.TR)),
    ("fa-arab", Label(LanguageCode.FA, ScriptCode.ARAB)),
])
def test_label_parse(text, expected):
    assert Label.parse(text) == expected


@pytest.mark.parametrize("bad", ["", "xx", "ckb-greek", "ckb-unknown", "ckbxyz"])
def test_label_parse_rejects(bad):
    with pytest.raises(LabelError):
        Label.parse(bad)


labels = st.builds(
    Label,
    st.sampled_from(list(LanguageCode)),
    st.one_of(st.none(), st.sampled_from([s for s in ScriptCode if s is not ScriptCode.UNKNOWN])),
)


@given(labels)
def test_label_round_trip(label):
    assert Label.parse(label.serialize()) == label


# ---------------------------------------------------------------- documents

def test_document_rejects_bad_date():
    with pytest.raises(ValueError):
        Document("a", "t", "s", date="14/03/2021")


def test_document_rejects_lone_surrogate():
    with pytest.raises(ValueError):
        Document("a", "bad \ud800", "s")


def test_write_empty():
    buf = io.StringIO()
    assert write_corpus([], buf) == 0
    assert buf.getvalue() == ""


def test_write_one_line_with_escaped_newline():
    buf = io.StringIO()
    write_corpus([Document("1", "line one\nline two", "src")], buf)
    out = buf.getvalue()
    assert out.count("\n") == 1 and out.endswith("\n")
    assert '"text": "line one\\nline two"' in out
    assert "topic" not in out  # absent optionals omitted


def test_round_trip_three_docs():
    docs = [
        Document("1", "سڵاو", "pewan", topic="news", title="T", date="2021-03-14",
                 language=Label.parse("sdh-arab")),
        Document("2", "ez\ndiçim", "wiki"),
        Document("3", "x", "y", date="2020-01-02T03:04:05+00:00"),
    ]
    buf = io.StringIO()
    write_corpus(docs, buf)
    assert read_corpus(io.StringIO(buf.getvalue())) == docs


def test_trailing_blank_line_ignored():
    text = encode_record({"id": "1", "text": "a", "source": "s"}) + "\n\n"
    assert len(read_corpus(io.StringIO(text))) == 1


def test_invalid_utf8_reports_line():
    raw = encode_record({"id": "1", "text": "a", "source": "s"}).encode() + b'{"id": "2", "text": "\xff", "source": "s"}\n'
    with pytest.raises(MalformedRecord) as err:
        read_corpus(io.BytesIO(raw))
    assert err.value.line == 2


def test_duplicate_id_is_malformed():
    text = encode_record({"id": "1", "text": "a", "source": "s"}) * 2
    with pytest.raises(MalformedRecord) as err:
        read_corpus(io.StringIO(text))
    assert err.value.line == 2


def test_lenient_mode_collects_errors():
    text = "{bad\n" + encode_record({"id": "1", "text": "a", "source": "s"}) + '{"id": "2"}\n'
    docs, errors = read_corpus_lenient(io.StringIO(text))
    assert [d.id for d in docs] == ["1"]
    assert [e.line for e in errors] == [1, 3]


def test_unknown_key_is_malformed():
    with pytest.raises(MalformedRecord):
        read_corpus(io.StringIO('{"id": "1", "text": "a", "source": "s", "extra": 1}\n'))


def test_dataset_round_trip():
    data = [LabeledSentence("ez diçim", Label.parse("kmr-latn")), LabeledSentence("من", Label.parse("fa"))]
    buf = io.StringIO()
    write_dataset(data, buf)
    assert read_dataset(io.StringIO(buf.getvalue())) == data


def test_labeled_sentence_rejects_blank():
    with pytest.raises(ValueError):
        LabeledSentence("   ", Label.parse("ckb"))


# ---------------------------------------------------------------- dataset assembly

def _corpora(n_labels=2, n=10):
    names = ["ckb-arab", "kmr-latn", "sdh-arab", "fa-arab"][:n_labels]
    return {Label.parse(name): [f"{name} sentence {i}" for i in range(n)] for name in names}


def test_split_sizes_and_disjoint():
    train, test = build_lid_dataset(_corpora(), 10, 0.2, seed=7)
    assert len(train) == 16 and len(test) == 4
    assert not {s.text for s in train} & {s.text for s in test}


def test_split_deterministic():
    assert build_lid_dataset(_corpora(), 10, 0.2, seed=7) == build_lid_dataset(_corpora(), 10, 0.2, seed=7)
    assert build_lid_dataset(_corpora(), 10, 0.2, seed=7) != build_lid_dataset(_corpora(), 10, 0.2, seed=8)


def test_split_samples_exactly_n_per_label():
    corpora = {Label.parse(name): [f"{name} {i}" for i in range(3500)]
               for name in ["ckb-arab", "ckb-latn", "kmr-latn", "kmr-arab", "sdh-arab", "hac-arab",
                            "zza-latn", "lki-arab", "ar-arab", "fa-arab", "tr-latn"]}
    train, test = build_lid_dataset(corpora, 3000, 0.2, seed=1)
    for label in corpora:
        assert sum(s.label == label for s in train + test) == 3000
        assert sum(s.label == label for s in test) == 600


def test_split_test_size_at_least_one():
    _, test = build_lid_dataset(_corpora(n=2), 2, 0.1, seed=1)
    assert len(test) == 2  # one per label


def test_insufficient_data_names_label():
    corpora = _corpora()
    corpora[Label.parse("kmr-latn")] = corpora[Label.parse("kmr-latn")][:5]
    with pytest.raises(InsufficientData) as err:
        build_lid_dataset(corpora, 10)
    assert err.value.label == Label.parse("kmr-latn")


@given(st.integers(2, 30), st.floats(0.05, 0.95), st.integers(0, 2**32))
def test_split_properties(n, fraction, seed):
    corpora = _corpora(3, 40)
    train, test = build_lid_dataset(corpora, n, fraction, seed)
    n_test = max(1, int(n * fraction + 0.5))
    for label in corpora:
        tr = {s.text for s in train if s.label == label}
        te = {s.text for s in test if s.label == label}
        assert not tr & te
        assert len(te) == n_test and len(tr) + len(te) == n


# ---------------------------------------------------------------- extraction

def test_extract_minimal_page():
    doc = extract_article("<html><head><title>T</title></head><body><p>hello</p></body></html>", "s")
    assert doc.title == "T" and doc.text == "hello"


def test_extract_drops_scripts():
    doc = extract_article("<p>a</p><script>x()</script><p>b</p>", "s")
    assert doc.text == "a\nb"


def test_extract_empty_page():
    with pytest.raises(EmptyExtraction):
        extract_article("<html><script>x()</script></html>", "s")


def test_extract_title_falls_back_to_heading():
    doc = extract_article("<h2>Heading</h2><p>body</p>", "s")
    assert doc.title == "Heading"


def test_extract_news_fixture(data_dir):
    doc = extract_article((data_dir / "news_article.html").read_bytes(), "fixture")
    expected = (data_dir / "news_article.expected.txt").read_text(encoding="utf-8").rstrip("\n")
    assert doc.text == expected
    assert doc.title == "باران لە کرماشان | هەواڵ"
    assert doc.topic == "کۆمەڵایەتی"
    assert doc.date == "2021-03-14"
