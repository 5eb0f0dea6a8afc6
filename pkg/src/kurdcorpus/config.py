"""Toolkit configuration file.

A flat UTF-8 ``key = value`` file; ``#`` starts a comment line.  Keys::

    seed = 1
    unification_table = path/to/table.tsv
    harmonization_table = path/to/table.tsv
    arab2latn_rules = path/to/rules.tsv
    latn2arab_rules = path/to/rules.tsv
    affix_inventory = path/to/affixes.tsv
    code_switch_threshold = 0.05
    clean.strip_emails = true          # any CleaningPolicy field
    lid.embedding_dim = 64             # any LidHyperparams field

Relative paths are resolved against the config file's directory.  Every
referenced file is loaded (and so validated) when the config is read;
unknown keys are an error.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, KurdCorpusError
from .lid.model import LidHyperparams
from .normalize import CleaningPolicy, NormalizationTable, TableMode
from .stats import AffixInventory
from .translit import RuleTable

_LID_FIELDS = {f.name: f.type for f in dataclasses.fields(LidHyperparams)}
_PATH_KEYS = (
    "unification_table", "harmonization_table", "arab2latn_rules", "latn2arab_rules", "affix_inventory",
)


@dataclass
class CliConfig:
    seed: int | None = None
    unification_table: NormalizationTable | None = None
    harmonization_table: NormalizationTable | None = None
    arab2latn_rules: RuleTable | None = None
    latn2arab_rules: RuleTable | None = None
    affix_inventory: AffixInventory | None = None
    code_switch_threshold: float | None = None
    cleaning: dict[str, str] = field(default_factory=dict)
    lid: dict[str, object] = field(default_factory=dict)

    def cleaning_policy(self) -> CleaningPolicy:
        return CleaningPolicy.from_config(self.cleaning)


def parse_pairs(text: str, origin: str = "<config>") -> list[tuple[int, str, str]]:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        pairs.append((lineno, key.strip(), value.strip()))
    return pairs


def _coerce_lid(key: str, value: str):
    kind = _LID_FIELDS[key]
    if kind in ("bool", bool):
        v = value.lower()
        if v in ("true", "yes", "1", "on"):
            return True
        if v in ("false", "no", "0", "off"):
            return False
        raise ConfigError(f"lid.{key}: expected a boolean")
    try:
        return float(value) if kind in ("float", float) else int(value)
    except ValueError:
        raise ConfigError(f"lid.{key}: invalid number {value!r}") from None


def _load_file(key: str, path: Path):
    if not path.is_file():
        raise ConfigError(f"{key}: file not found: {path}")
    try:
        if key == "unification_table":
            return NormalizationTable.load(path, TableMode.ENCODING_UNIFICATION)
        if key == "harmonization_table":
            return NormalizationTable.load(path, TableMode.KURDISH_HARMONIZATION)
        if key in ("arab2latn_rules", "latn2arab_rules"):
            return RuleTable.load(path)
        return AffixInventory.load(path)
    except (KurdCorpusError, ValueError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{key}: cannot load {path}: {exc}") from None


def load_config(path: str | Path) -> CliConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    cfg = CliConfig()
    for lineno, key, value in parse_pairs(text, str(path)):
        where = f"{path}:{lineno}"
        if key == "seed":
            try:
                cfg.seed = int(value)
            except ValueError:
                raise ConfigError(f"{where}: seed must be an integer") from None
        elif key == "code_switch_threshold":
            try:
                cfg.code_switch_threshold = float(value)
            except ValueError:
                raise ConfigError(f"{where}: threshold must be a number") from None
        elif key in _PATH_KEYS:
            target = Path(value)
            if not target.is_absolute():
                target = path.parent / target
            setattr(cfg, key, _load_file(key, target))
        elif key.startswith("clean.") and key[6:] in CleaningPolicy.CONFIG_KEYS:
            cfg.cleaning[key[6:]] = value
        elif key.startswith("lid.") and key[4:] in _LID_FIELDS:
            cfg.lid[key[4:]] = _coerce_lid(key[4:], value)
        else:
            raise ConfigError(f"{where}: unknown key {key!r}")
    if cfg.cleaning:
        CleaningPolicy.from_config(cfg.cleaning)  # validate now, not at first use
    if cfg.lid:
        try:
            LidHyperparams(**cfg.lid)
        except ValueError as exc:
            raise ConfigError(f"{path}: invalid lid settings: {exc}") from None
    return cfg
