"""Record types passed between pipeline stages."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from urllib.parse import quote

PROJECTS = ("wikipedia", "wikisource", "wikiquote", "wikibooks", "wikinews")

# Wiki database name suffix per project, e.g. srwiki, srwikiquote.
PROJECT_DB_SUFFIX = {
    "wikipedia": "wiki",
    "wikisource": "wikisource",
    "wikiquote": "wikiquote",
    "wikibooks": "wikibooks",
    "wikinews": "wikinews",
}

PROJECT_DOMAIN = {
    "wikipedia": "wikipedia.org",
    "wikisource": "wikisource.org",
    "wikiquote": "wikiquote.org",
    "wikibooks": "wikibooks.org",
    "wikinews": "wikinews.org",
}

_VERSION_RE = re.compile(r"^\d{8}$")


def site_url(language_code: str, project: str, title: str) -> str:
    """Canonical page URL: spaces become underscores, rest percent-encoded."""
    path = quote(title.replace(" ", "_"), safe="/_:,()'!*~-")
    return f"https://{language_code}.{PROJECT_DOMAIN[project]}/wiki/{path}"


@dataclass(frozen=True)
class DumpDescriptor:
    """Identifies one dated dump of one Wikimedia project."""

    language_code: str
    project: str
    dump_version: str
    source_url: str = "https://dumps.wikimedia.org"

    def __post_init__(self):
        if self.project not in PROJECTS:
            raise ValueError(f"unknown project {self.project!r}; expected one of {PROJECTS}")
        if not _VERSION_RE.match(self.dump_version):
            raise ValueError(f"dump_version must be YYYYMMDD, got {self.dump_version!r}")

    @property
    def wiki_db(self) -> str:
        """Database name, e.g. 'srwiki' for Serbian Wikipedia."""
        return self.language_code + PROJECT_DB_SUFFIX[self.project]

    @property
    def archive_name(self) -> str:
        return f"{self.wiki_db}-{self.dump_version}-pages-articles.xml.bz2"

    @property
    def dump_url(self) -> str:
        base = self.source_url.rstrip("/")
        return f"{base}/{self.wiki_db}/{self.dump_version}/{self.archive_name}"

    @property
    def site_host(self) -> str:
        return f"{self.language_code}.{PROJECT_DOMAIN[self.project]}"


@dataclass
class RawPage:
    """One page as read from the dump XML."""

    page_id: int
    title: str
    namespace: int
    text: str
    is_redirect: bool = False


@dataclass
class CleanArticle:
    """Cleaned article text plus the metadata kept alongside it."""

    page_id: int
    title: str
    url: str
    text: str
    categories: list[str] = field(default_factory=list)
    word_count: int = 0
    cyrillic_ratio: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "id": self.page_id,
            "title": self.title,
            "url": self.url,
            "text": self.text,
            "categories": self.categories,
            "word_count": self.word_count,
            "cyrillic_ratio": self.cyrillic_ratio,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CleanArticle":
        return cls(
            page_id=obj["id"],
            title=obj.get("title", ""),
            url=obj.get("url", ""),
            text=obj["text"],
            categories=list(obj.get("categories", [])),
            word_count=obj.get("word_count", len(obj["text"].split())),
            cyrillic_ratio=obj.get("cyrillic_ratio", 0.0),
        )


@dataclass
class EncodedArticle:
    """Fixed-prefix vector of vocabulary indices for one article."""

    page_id: int
    vector: list[int]
    categories: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {"id": self.page_id, "vector": self.vector, "categories": self.categories}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "EncodedArticle":
        return cls(page_id=obj["id"], vector=list(obj["vector"]),
                   categories=list(obj.get("categories", [])))


@dataclass
class Bucket:
    """One comparison group: articles sharing a category, capped in size."""

    category: str
    chunk_index: int
    members: list[int]


@dataclass
class SimilarityRecord:
    """Retained best similarity scores for one article."""

    page_id: int
    top_scores: list[float] = field(default_factory=list)

    @property
    def aggregate(self) -> float:
        padded = list(self.top_scores[:3]) + [0.0] * (3 - len(self.top_scores[:3]))
        return sum(padded) / 3.0


@dataclass
class KneeResult:
    """Cutoff location in a sorted score list."""

    cutoff: float
    index: int
    found: bool


@dataclass
class IngestStats:
    """Counters from one serialization pass over a page stream."""

    pages_read: int = 0
    retained: int = 0
    skipped_redirect: int = 0
    skipped_namespace: int = 0
    skipped_too_short: int = 0
    chars_replaced: int = 0

    def skipped_total(self) -> int:
        return self.skipped_redirect + self.skipped_namespace + self.skipped_too_short

    def to_json_dict(self) -> dict:
        return {
            "pages_read": self.pages_read,
            "retained": self.retained,
            "skipped_redirect": self.skipped_redirect,
            "skipped_namespace": self.skipped_namespace,
            "skipped_too_short": self.skipped_too_short,
            "chars_replaced": self.chars_replaced,
        }
