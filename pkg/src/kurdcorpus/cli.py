"""Command-line front end: ``kurdcorpus <subcommand> ...``.

Exit status: 0 on success, 1 on usage errors, 2 on data errors.  Output
goes to stdout or to ``--out PATH``; files are written to a temporary file
and renamed into place only on success.
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Iterator

from .config import CliConfig, load_config
from .core import (
    Label, LabeledSentence, build_lid_dataset, encode_record, iter_corpus, read_dataset, write_dataset,
)
from .errors import ConfigError, KurdCorpusError, MalformedRecord
from .extract import extract_article
from .lid.metrics import evaluate, evaluate_external
from .lid.model import LabelScheme, LidHyperparams, LidModel
from .lid.train import aggregate_dataset, train
from .normalize import (
    CleaningPolicy, NormalizationTable, TableMode, clean, flag_code_switch, shipped_table, unify_encoding,
)
from .stats import (
    AffixInventory, corpus_stats, extract_types, rank_frequency, tokenize, tokenize_sentences, top_k,
    variety_cues, zipf_fit,
)
from .translit import RuleTable, arab_to_latin, detect_script, latin_to_arab

log = logging.getLogger("kurdcorpus")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# output helpers

@contextlib.contextmanager
def open_output(path: str | None, binary: bool = False) -> Iterator:
    """Yield a writable stream; files appear atomically when the block succeeds."""
    if path is None or path == "-":
        stream = sys.stdout.buffer if binary else sys.stdout
        yield stream
        stream.flush()
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent or ".")
    try:
        if binary:
            fh = os.fdopen(fd, "wb")
        else:
            fh = os.fdopen(fd, "w", encoding="utf-8", newline="\n")
        with fh:
            yield fh
        os.replace(tmp, target)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


@contextlib.contextmanager
def open_input(path: str | None, binary: bool = False):
    if path is None or path == "-":
        yield sys.stdin.buffer if binary else sys.stdin
        return
    with open(path, "rb" if binary else "r", **({} if binary else {"encoding": "utf-8", "newline": "\n"})) as fh:
        yield fh


def _input_name(path):
    return "<stdin>" if path in (None, "-") else path


def _emit(stream, args, record: dict, text: str) -> None:
    if args.format == "records":
        stream.write(encode_record(record))
    else:
        stream.write(text)


def _map_corpus(args, transform) -> int:
    """Stream a corpus, replacing each document's text by ``transform(text)``."""
    with open_input(args.input, binary=True) as src, open_output(args.out) as out:
        for doc in iter_corpus(src, path=_input_name(args.input)):
            new = transform(doc.text)
            out.write(encode_record(dataclasses.replace(doc, text=new).to_record()))
    return EXIT_OK


def _text_or_corpus(args, transform) -> int:
    if args.text is not None:
        with open_output(args.out) as out:
            out.write(transform(args.text) + "\n")
        return EXIT_OK
    return _map_corpus(args, transform)


# --------------------------------------------------------------------------
# subcommands

def cmd_ingest(args, cfg: CliConfig) -> int:
    count = skipped = 0
    with open_output(args.out) as out:
        for name in args.html:
            data = Path(name).read_bytes()
            source = args.source or name
            try:
                doc = extract_article(data, source)
            except KurdCorpusError as exc:
                if not args.skip_empty:
                    raise KurdCorpusError(f"{name}: {exc}") from None
                skipped += 1
                continue
            if args.language:
                doc = dataclasses.replace(doc, language=Label.parse(args.language))
            out.write(encode_record(doc.to_record()))
            count += 1
    log.info("ingested %d pages, skipped %d", count, skipped)
    return EXIT_OK


def _normalization_table(args, cfg):
    if args.table:
        return NormalizationTable.load(args.table, TableMode(args.mode))
    mode = TableMode(args.mode)
    configured = cfg.unification_table if mode is TableMode.ENCODING_UNIFICATION else cfg.harmonization_table
    return configured or shipped_table(mode)


def cmd_normalize(args, cfg):
    table = _normalization_table(args, cfg)
    return _text_or_corpus(args, lambda text: unify_encoding(text, table))


def _cleaning_policy(args, cfg) -> CleaningPolicy:
    values = dict(cfg.cleaning)
    for key in CleaningPolicy.CONFIG_KEYS:
        value = getattr(args, key)
        if value is not None:
            values[key] = str(value).lower() if isinstance(value, bool) else value
    return CleaningPolicy.from_config(values)


def cmd_clean(args, cfg):
    policy = _cleaning_policy(args, cfg)
    if policy.is_noop():
        raise UsageError("cleaning policy disables every option")
    total = 0

    def run(text):
        nonlocal total
        cleaned, n = clean(text, policy)
        total += n
        return cleaned

    status = _text_or_corpus(args, run)
    log.info("redactions: %d", total)
    return status


def tokenized_text(text: str, split_zwnj: bool = False) -> str:
    """Tokens joined by spaces, one sentence per line."""
    return "\n".join(" ".join(t.surface for t in toks) for _, toks in tokenize_sentences(text, split_zwnj))


def cmd_tokenize(args, cfg):
    if args.text is not None and args.format == "records":
        with open_output(args.out) as out:
            for tok in tokenize(args.text, args.split_zwnj):
                out.write(encode_record({"surface": tok.surface, "kind": tok.kind.value}))
        return EXIT_OK
    return _text_or_corpus(args, lambda text: tokenized_text(text, args.split_zwnj))


def _read_docs(args):
    with open_input(args.input, binary=True) as src:
        return list(iter_corpus(src, path=_input_name(args.input)))


def _threshold(args, cfg):
    if args.no_code_switch:
        return None
    if args.threshold is not None:
        return args.threshold
    return cfg.code_switch_threshold if cfg.code_switch_threshold is not None else 0.05


def _type_counts(args, cfg) -> dict[str, int]:
    threshold = _threshold(args, cfg)
    counts: dict[str, int] = {}
    with open_input(args.input, binary=True) as src:
        for doc in iter_corpus(src, path=_input_name(args.input)):
            sentences = tokenize_sentences(doc.text, args.split_zwnj)
            flags = [threshold is not None and flag_code_switch(s, threshold).flagged for s, _ in sentences]
            for t, n in extract_types([toks for _, toks in sentences], drop_flagged=flags).items():
                counts[t] = counts.get(t, 0) + n
    return counts


def cmd_stats(args, cfg):
    docs = _read_docs(args)
    report = corpus_stats(docs, _threshold(args, cfg), args.split_zwnj)
    record = report.to_record()
    text = report.to_text()
    if args.cues:
        inventory = cfg.affix_inventory or AffixInventory.shipped()
        tokens = [t for d in docs for t in tokenize(d.text, args.split_zwnj)]
        cues = {k.value: v for k, v in variety_cues(tokens, inventory).items()}
        record["variety_cues"] = cues
        text += "".join(f"cues.{k}: {v}\n" for k, v in cues.items())
    with open_output(args.out) as out:
        _emit(out, args, record, text)
    return EXIT_OK


def cmd_zipf(args, cfg):
    table = rank_frequency(_type_counts(args, cfg))
    with open_output(args.out) as out:
        if args.fit:
            lo, hi = args.fit
            slope, intercept = zipf_fit(table, lo, hi)
            _emit(out, args, {"rank_min": lo, "rank_max": hi, "slope": slope, "intercept": intercept},
                  f"slope: {slope!r}\nintercept: {intercept!r}\n")
        else:
            out.write(table.to_csv())
    return EXIT_OK


def cmd_topk(args, cfg):
    rows = top_k(_type_counts(args, cfg), args.k)
    with open_output(args.out) as out:
        for t, n in rows:
            _emit(out, args, {"type": t, "frequency": n}, f"{t}\t{n}\n")
    return EXIT_OK


def cmd_translit(args, cfg):
    if args.direction == "arab2latn":
        rules = RuleTable.load(args.rules) if args.rules else cfg.arab2latn_rules
        fn = arab_to_latin
    else:
        rules = RuleTable.load(args.rules) if args.rules else cfg.latn2arab_rules
        fn = latin_to_arab
    return _text_or_corpus(args, lambda text: fn(text, rules))


def cmd_detect_script(args, cfg):
    def line(key, text):
        script, profile = detect_script(text)
        record = {"id": key, "script": script.value, "arabic_letters": profile.arabic_letters,
                  "latin_letters": profile.latin_letters, "kurdish_distinctive": profile.kurdish_distinctive,
                  "other": profile.other}
        return record, f"{key}\t{script.value}\n" if key is not None else f"{script.value}\n"

    with open_output(args.out) as out:
        if args.text is not None:
            _emit(out, args, *line(None, args.text))
            return EXIT_OK
        with open_input(args.input, binary=True) as src:
            for doc in iter_corpus(src, path=_input_name(args.input)):
                _emit(out, args, *line(doc.id, doc.text))
    return EXIT_OK


def _hyperparams(args, cfg) -> LidHyperparams:
    values = dict(cfg.lid)
    for key in ("embedding_dim", "ngram_min", "ngram_max", "epochs", "learning_rate", "bucket_count", "threads"):
        value = getattr(args, key)
        if value is not None:
            values[key] = value
    if args.no_word_unigrams:
        values["include_word_unigrams"] = False
    values["seed"] = args.seed if args.seed is not None else (cfg.seed if cfg.seed is not None else values.get("seed", 1))
    try:
        return LidHyperparams(**values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_dataset(path) -> list[LabeledSentence]:
    with open_input(path, binary=True) as src:
        return read_dataset(src, path=_input_name(path))


def cmd_lid_train(args, cfg):
    hyper = _hyperparams(args, cfg)
    scheme = LabelScheme(args.scheme)
    data = _load_dataset(args.train)
    if scheme is LabelScheme.LANGUAGE_ONLY:
        data = aggregate_dataset(data, scheme)
    result = train(data, hyper, scheme)
    with open_output(args.out, binary=True) as out:
        result.model.write(out)
    log.info("final-epoch loss %.6f over %d steps", result.final_epoch_loss, result.steps)
    return EXIT_OK


def cmd_lid_predict(args, cfg):
    model = LidModel.load(args.model)
    if args.text is not None:
        sentences = [args.text]
    else:
        with open_input(args.input) as src:
            sentences = [line.rstrip("\n") for line in src if line.strip()]
    with open_output(args.out) as out:
        for sentence in sentences:
            pred = model.predict(sentence, args.k)
            record = {"text": sentence, "predictions": [[lab.serialize(), p] for lab, p in pred.ranked]}
            text = "\t".join(f"{lab.serialize()}\t{p:.6f}" for lab, p in pred.ranked) + "\n"
            _emit(out, args, record, text)
    return EXIT_OK


def _write_report(args, report):
    with open_output(args.out) as out:
        _emit(out, args, report.to_record(), report.to_text())
    if args.confusion_csv:
        with open_output(args.confusion_csv) as out:
            out.write(report.confusion_csv())


def cmd_lid_eval(args, cfg):
    model = LidModel.load(args.model)
    test = _load_dataset(args.test)
    if model.scheme is LabelScheme.LANGUAGE_ONLY:
        test = aggregate_dataset(test, model.scheme)
    _write_report(args, evaluate(model, test))
    return EXIT_OK


def cmd_lid_eval_external(args, cfg):
    pairs = []
    with open_input(args.input) as src:
        for line in src:
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise MalformedRecord(len(pairs) + 1, "expected 'reference TAB predicted'", _input_name(args.input))
            pairs.append((parts[0], parts[1]))
    _write_report(args, evaluate_external(pairs))
    return EXIT_OK


def cmd_split(args, cfg):
    corpora = {}
    for item in args.corpus:
        label, sep, path = item.partition("=")
        if not sep:
            raise UsageError(f"--corpus expects LABEL=PATH, got {item!r}")
        with open(path, encoding="utf-8") as fh:
            corpora[Label.parse(label)] = fh.read().splitlines()
    seed = args.seed if args.seed is not None else (cfg.seed if cfg.seed is not None else 1)
    train_set, test_set = build_lid_dataset(corpora, args.n, args.test_fraction, seed)
    with open_output(args.train_out) as out:
        write_dataset(train_set, out)
    with open_output(args.test_out) as out:
        write_dataset(test_set, out)
    log.info("split: %d train, %d test", len(train_set), len(test_set))
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    def global_flags(suppress):
        # Global flags are accepted before or after the subcommand; the
        # subcommand copies use SUPPRESS so they do not reset earlier values.
        g = _Parser(add_help=False)
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        g.add_argument("--seed", type=int, help="random seed (split, lid-train)", **kw)
        g.add_argument("--config", help="key = value configuration file", **kw)
        g.add_argument("--quiet", action="store_true", help="suppress progress messages", **kw)
        g.add_argument("--format", choices=("text", "records"), help="report format",
                       **(kw or {"default": "text"}))
        g.add_argument("--out", help="output path (default: stdout)", **kw)
        return g

    common = global_flags(suppress=True)
    parser = _Parser(prog="kurdcorpus", description="Kurdish corpus toolkit", parents=[global_flags(False)])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, parents=[common], description=help_text)
        p.set_defaults(func=func)
        return p

    def corpus_input(p, text=True):
        p.add_argument("input", nargs="?", help="corpus file (default: stdin)")
        if text:
            p.add_argument("--text", help="process this string instead of a corpus")

    p = add("ingest", cmd_ingest, "extract articles from saved HTML pages into a corpus")
    p.add_argument("html", nargs="+", help="saved HTML files")
    p.add_argument("--source", help="source name recorded for every page (default: file path)")
    p.add_argument("--language", help="label recorded on every document, e.g. sdh-arab")
    p.add_argument("--skip-empty", action="store_true", help="skip pages with no visible text")

    p = add("normalize", cmd_normalize, "unify character encodings")
    corpus_input(p)
    p.add_argument("--mode", choices=[m.value for m in TableMode], default=TableMode.ENCODING_UNIFICATION.value)
    p.add_argument("--table", help="normalization table file (overrides config and shipped table)")

    p = add("clean", cmd_clean, "remove URLs and e-mail addresses, fold digits, tidy whitespace")
    corpus_input(p)
    for key in ("strip_emails", "strip_urls", "collapse_whitespace", "zwnj_to_space"):
        flag = key.replace("_", "-")
        p.add_argument(f"--{flag}", dest=key, action="store_true", default=None)
        p.add_argument(f"--no-{flag}", dest=key, action="store_false")
    p.add_argument("--digit-policy", dest="digit_policy", choices=("keep", "fold-to-ascii", "drop"))

    p = add("tokenize", cmd_tokenize, "tokenize text (one sentence per line, tokens space-separated)")
    corpus_input(p)
    p.add_argument("--split-zwnj", action="store_true", help="treat ZWNJ as a separate token")

    def stats_options(p):
        corpus_input(p, text=False)
        p.add_argument("--threshold", type=float, help="code-switch flag threshold (default 0.05)")
        p.add_argument("--no-code-switch", action="store_true", help="do not exclude flagged sentences")
        p.add_argument("--split-zwnj", action="store_true")

    p = add("stats", cmd_stats, "article, token and type statistics")
    stats_options(p)
    p.add_argument("--cues", action="store_true", help="add affix-based variety cue counts")

    p = add("zipf", cmd_zipf, "rank-frequency table as CSV, or a log-log fit with --fit")
    stats_options(p)
    p.add_argument("--fit", nargs=2, type=int, metavar=("RANK_MIN", "RANK_MAX"))

    p = add("topk", cmd_topk, "most frequent word types")
    stats_options(p)
    p.add_argument("-k", type=int, default=10)

    p = add("translit", cmd_translit, "transliterate between Perso-Arabic and Latin script")
    corpus_input(p)
    p.add_argument("--direction", choices=("arab2latn", "latn2arab"), required=True)
    p.add_argument("--rules", help="rule table file")

    p = add("detect-script", cmd_detect_script, "detect the script of each document")
    corpus_input(p)

    p = add("lid-train", cmd_lid_train, "train a language-identification model")
    p.add_argument("--train", required=True, help="dataset file with text and label records")
    p.add_argument("--scheme", choices=[s.value for s in LabelScheme], default=LabelScheme.LANGUAGE_AND_SCRIPT.value)
    p.add_argument("--dim", dest="embedding_dim", type=int)
    p.add_argument("--ngram-min", type=int)
    p.add_argument("--ngram-max", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--lr", dest="learning_rate", type=float)
    p.add_argument("--buckets", dest="bucket_count", type=int)
    p.add_argument("--no-word-unigrams", action="store_true")
    p.add_argument("--threads", type=int, help="more than 1 enables non-deterministic parallel training")

    p = add("lid-predict", cmd_lid_predict, "predict labels for sentences")
    p.add_argument("input", nargs="?", help="text file, one sentence per line")
    p.add_argument("--model", required=True)
    p.add_argument("--text")
    p.add_argument("-k", type=int, default=1)

    p = add("lid-eval", cmd_lid_eval, "evaluate a model on a labelled test set")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--confusion-csv", help="also write the confusion matrix as CSV")

    p = add("lid-eval-external", cmd_lid_eval_external, "evaluate external 'reference TAB predicted' pairs")
    p.add_argument("input", nargs="?", help="TSV file (default: stdin)")
    p.add_argument("--confusion-csv")

    p = add("split", cmd_split, "sample and split labelled sentences into train/test datasets")
    p.add_argument("--corpus", action="append", required=True, metavar="LABEL=PATH",
                   help="plain-text file with one sentence per line for LABEL (repeatable)")
    p.add_argument("-n", type=int, required=True, help="sentences per label")
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--train-out", required=True)
    p.add_argument("--test-out", required=True)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s: %(message)s", force=True)
    try:
        cfg = load_config(args.config) if args.config else CliConfig()
        return args.func(args, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"kurdcorpus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"kurdcorpus: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KurdCorpusError, ValueError, OSError, UnicodeDecodeError) as exc:
        print(f"kurdcorpus: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
