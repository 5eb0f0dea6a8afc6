"""Kurdish corpus toolkit.

Corpus records, Perso-Arabic normalization, corpus statistics,
transliteration, script detection and language identification.
"""

from .core import (
    Document, LabeledSentence, Label, LanguageCode, ScriptCode, build_lid_dataset, iter_corpus, read_corpus,
    read_corpus_lenient, read_dataset, write_corpus, write_dataset,
)
from .extract import extract_article
from .normalize import (
    CleaningPolicy, CodeSwitchFlag, DigitPolicy, NormalizationTable, TableMode, clean, flag_code_switch,
    shipped_table, unify_encoding,
)
from .stats import (
    AffixInventory, RankFrequencyTable, StatsReport, Token, TokenKind, corpus_stats, extract_types,
    rank_frequency, tokenize, top_k, variety_cues, zipf_fit,
)
from .translit import RuleTable, ScriptProfile, arab_to_latin, detect_script, latin_to_arab

__all__ = [
    "AffixInventory", "CleaningPolicy", "CodeSwitchFlag", "DigitPolicy", "Document", "Label", "LabeledSentence",
    "LanguageCode", "NormalizationTable", "RankFrequencyTable", "RuleTable", "ScriptCode", "ScriptProfile",
    "StatsReport", "TableMode", "Token", "TokenKind", "arab_to_latin", "build_lid_dataset", "clean",
    "corpus_stats", "detect_script", "extract_article", "extract_types", "flag_code_switch", "iter_corpus",
    "latin_to_arab", "rank_frequency", "read_corpus", "read_corpus_lenient", "read_dataset", "shipped_table",
    "tokenize", "top_k", "unify_encoding", "variety_cues", "write_corpus", "write_dataset", "zipf_fit",
]
