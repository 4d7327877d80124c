"""Configuration objects and loaders for the cleaning and pipeline stages.

Localized tables (category prefixes, section titles, redirect keywords)
are data files under ``corpusforge/data``, one JSON file per language,
merged over a language-independent default table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import ConfigError
from .records import PROJECTS, DumpDescriptor

# Tag handling defaults: tags whose content is removed outright, and tags
# kept verbatim. Everything else loses the tag but keeps its content.
DEFAULT_DESTROY_TAGS = frozenset({"noinclude", "ref", "gallery", "timeline"})
DEFAULT_PRESERVE_TAGS = frozenset({"math", "code", "syntaxhighlight", "b", "sup", "sub"})

# Templates flattened to their parameter text instead of being dropped.
DEFAULT_KEEP_TEMPLATES = frozenset({"ppoem", "cquote"})

SECTION_MODES = ("exclude_listed", "include_only_listed")


@dataclass(frozen=True)
class TagPolicy:
    """Which HTML-like tags to destroy, preserve, or strip."""

    destroy: frozenset[str] = DEFAULT_DESTROY_TAGS
    preserve: frozenset[str] = DEFAULT_PRESERVE_TAGS

    def __post_init__(self) -> None:
        overlap = self.destroy & self.preserve
        if overlap:
            raise ConfigError(f"tags cannot be both destroyed and preserved: {sorted(overlap)}")


@dataclass(frozen=True)
class SectionPolicy:
    """Section filtering mode and the headings it applies to."""

    mode: str
    titles: frozenset[str]
    keep_lead: bool = True

    def __post_init__(self) -> None:
        if self.mode not in SECTION_MODES:
            raise ConfigError(f"unknown section mode: {self.mode!r}")
        object.__setattr__(self, "titles", frozenset(t.casefold() for t in self.titles))

    def matches(self, heading: str) -> bool:
        return heading.strip().casefold() in self.titles


@dataclass(frozen=True)
class LanguageTable:
    """Localized wikitext vocabulary for one language."""

    language: str
    category_prefixes: tuple[str, ...]
    file_prefixes: tuple[str, ...]
    redirect_keywords: tuple[str, ...]
    excluded_sections: tuple[str, ...]
    quote_sections: tuple[str, ...]
    replacements: tuple[tuple[str, str], ...] = ()


def _read_table_file(name: str) -> dict | None:
    ref = resources.files("corpusforge.data").joinpath(f"{name}.json")
    if not ref.is_file():
        return None
    return json.loads(ref.read_text(encoding="utf-8"))


def available_languages() -> list[str]:
    names = []
    for entry in resources.files("corpusforge.data").iterdir():
        if entry.name.endswith(".json") and entry.name != "default.json":
            names.append(entry.name[:-5])
    return sorted(names)


@lru_cache(maxsize=None)
def load_language_table(language: str) -> LanguageTable:
    """Load the seed table for a language, merged over defaults.

    Unknown languages fall back to the default (English) table alone.
    """
    base = _read_table_file("default")
    if base is None:
        raise ConfigError("default language table missing from package data")
    extra = _read_table_file(language) or {}

    def merged(key: str) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for value in list(extra.get(key, [])) + list(base.get(key, [])):
            seen.setdefault(value, None)
        return tuple(seen)

    repls = [tuple(pair) for pair in base.get("replacements", [])]
    repls += [tuple(pair) for pair in extra.get("replacements", [])]
    return LanguageTable(
        language=language,
        category_prefixes=merged("category_prefixes"),
        file_prefixes=merged("file_prefixes"),
        redirect_keywords=merged("redirect_keywords"),
        excluded_sections=merged("excluded_sections"),
        quote_sections=merged("quote_sections"),
        replacements=tuple(repls),
    )


@dataclass(frozen=True)
class CleanConfig:
    """Everything clean_article needs for one language+project dataset."""

    language: str = "sr"
    project: str = "wikipedia"
    dump_version: str = "20260401"
    table: LanguageTable | None = None
    tag_policy: TagPolicy = field(default_factory=TagPolicy)
    keep_templates: frozenset[str] = DEFAULT_KEEP_TEMPLATES
    section_policy: SectionPolicy | None = None
    include_quote_lead: bool = False
    timeout_s: int = 60
    min_chars: int = 80
    source_url: str = "https://dumps.wikimedia.org"

    def __post_init__(self) -> None:
        if self.project not in PROJECTS:
            raise ConfigError(f"unknown project: {self.project!r}")
        if self.table is None:
            object.__setattr__(self, "table", load_language_table(self.language))
        if self.section_policy is None:
            object.__setattr__(self, "section_policy", _default_section_policy(self))
        if self.timeout_s <= 0:
            raise ConfigError("timeout_s must be positive")

    @property
    def keep_templates_folded(self) -> frozenset[str]:
        return frozenset(name.casefold() for name in self.keep_templates)

    @property
    def descriptor(self) -> DumpDescriptor:
        return DumpDescriptor(
            language_code=self.language,
            project=self.project,
            dump_version=self.dump_version,
            source_url=self.source_url,
        )


def _default_section_policy(cfg: CleanConfig) -> SectionPolicy:
    # Wikiquote keeps only quote sections; every other project drops the
    # boilerplate sections instead.
    assert cfg.table is not None
    if cfg.project == "wikiquote":
        return SectionPolicy(
            mode="include_only_listed",
            titles=frozenset(cfg.table.quote_sections),
            keep_lead=cfg.include_quote_lead,
        )
    return SectionPolicy(
        mode="exclude_listed",
        titles=frozenset(cfg.table.excluded_sections),
    )


@dataclass(frozen=True)
class PipelineConfig:
    """Full-run configuration: dataset identity plus every stage knob."""

    language: str = "sr"
    project: str = "wikipedia"
    version: str = "20260401"
    source_url: str = "https://dumps.wikimedia.org"
    workdir: Path = Path("work")
    workers: int = 1
    timeout_s: int = 60
    min_chars: int = 80
    min_freq: int = 3
    max_words: int = 2000
    prefix: int = 500
    max_bucket: int = 3000
    perms: int = 128
    threshold: float = 0.5
    seed: int = 42
    knee_sensitivity: float = 1.0
    top_k: int = 100
    include_quote_lead: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "workdir", Path(self.workdir))
        for name in ("workers", "timeout_s", "min_freq", "max_words", "prefix",
                     "max_bucket", "perms", "top_k"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError("threshold must lie in [0, 1]")
        if self.knee_sensitivity <= 0:
            raise ConfigError("knee_sensitivity must be positive")

    @property
    def descriptor(self) -> DumpDescriptor:
        return DumpDescriptor(
            language_code=self.language,
            project=self.project,
            dump_version=self.version,
            source_url=self.source_url,
        )

    def clean_config(self) -> CleanConfig:
        return CleanConfig(
            language=self.language,
            project=self.project,
            dump_version=self.version,
            include_quote_lead=self.include_quote_lead,
            timeout_s=self.timeout_s,
            min_chars=self.min_chars,
            source_url=self.source_url,
        )


_PIPELINE_KEYS = {
    "language", "project", "version", "source_url", "workdir", "workers",
    "timeout_s", "min_chars", "min_freq", "max_words", "prefix", "max_bucket",
    "perms", "threshold", "seed", "knee_sensitivity", "top_k",
    "include_quote_lead",
}


def _parse_config_text(path: Path) -> dict:
    suffix = path.suffix.lower()
    if suffix == ".json":
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if suffix == ".toml":
        try:
            import tomllib
        except ImportError as exc:
            raise ConfigError(
                f"{path}: TOML configs need Python 3.11+; use a .json config"
            ) from exc
        try:
            return tomllib.loads(path.read_text(encoding="utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    raise ConfigError(f"{path}: unsupported config format (use .json or .toml)")


def load_pipeline_config(path: str | Path, **overrides) -> PipelineConfig:
    """Read a pipeline config file and apply keyword overrides."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    raw = _parse_config_text(path)
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top-level value must be a table/object")
    unknown = set(raw) - _PIPELINE_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {sorted(unknown)}")
    merged = dict(raw)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return PipelineConfig(**merged)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def override(cfg: PipelineConfig, **changes) -> PipelineConfig:
    """Return a copy of cfg with the given non-None fields replaced."""
    filtered = {k: v for k, v in changes.items() if v is not None}
    return replace(cfg, **filtered) if filtered else cfg


def load_clean_config(path: str | Path) -> CleanConfig:
    """Read a cleaning config file (language/project plus optional knobs)."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    raw = _parse_config_text(path)
    allowed = {"language", "project", "include_quote_lead", "timeout_s",
               "min_chars", "source_url"}
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {sorted(unknown)}")
    return CleanConfig(**raw)
