"""Corpus reports and token-frequency distance.

The distance between two corpora is the cosine distance between their
z-scored relative-frequency vectors over a shared token axis, following
the stylometric Delta family.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .encode import tokenize
from .records import CleanArticle

DEFAULT_TOP_K = 100

logger = logging.getLogger(__name__)


@dataclass
class FreqProfile:
    """Relative token frequencies of one corpus plus its top-k tokens."""

    tokens: list[str] = field(default_factory=list)
    rel_freq: dict[str, float] = field(default_factory=dict)

    def frequency(self, token: str) -> float:
        return self.rel_freq.get(token, 0.0)


def profile(corpus: Iterable[CleanArticle], k: int = DEFAULT_TOP_K) -> FreqProfile:
    """Token-frequency profile over the whole corpus, top-k retained."""
    if k < 1:
        raise ValueError("k must be at least 1")
    counts: Counter = Counter()
    for article in corpus:
        counts.update(tokenize(article.text))
    total = sum(counts.values())
    if total == 0:
        raise ValueError("cannot profile an empty corpus")
    ordered = sorted(counts, key=lambda t: (-counts[t], t))
    rel = {t: counts[t] / total for t in counts}
    return FreqProfile(tokens=ordered[:k], rel_freq=rel)


def delta_axis(p: FreqProfile, q: FreqProfile, mode: str = "first") -> list[str]:
    """Shared token axis: the first profile's top-k, or the union of both."""
    if mode == "first":
        return list(p.tokens)
    if mode == "union":
        merged = dict.fromkeys(p.tokens)
        merged.update(dict.fromkeys(q.tokens))
        return list(merged)
    raise ValueError(f"unknown axis mode: {mode!r}")


def _project(profile_: FreqProfile, axis: Sequence[str]) -> np.ndarray:
    return np.array([profile_.frequency(t) for t in axis], dtype=float)


def _zscore(v: np.ndarray) -> np.ndarray:
    std = v.std()
    if std == 0.0:
        raise ValueError("degenerate profile: zero variance over the axis")
    return (v - v.mean()) / std


def cosine_delta(p: FreqProfile, q: FreqProfile,
                 reference_axis: Sequence[str] | None = None,
                 standardize: bool = True) -> float:
    """Cosine distance in [0, 2] between the two profiles on one axis.

    Vectors are z-scored per the Delta convention; pass
    standardize=False for a plain relative-frequency cosine.
    """
    axis = list(reference_axis) if reference_axis is not None else delta_axis(p, q)
    if not axis:
        raise ValueError("empty reference axis")
    vp = _project(p, axis)
    vq = _project(q, axis)
    if standardize:
        vp = _zscore(vp)
        vq = _zscore(vq)
    norm = np.linalg.norm(vp) * np.linalg.norm(vq)
    if norm == 0.0:
        raise ValueError("degenerate profile: zero vector over the axis")
    cos = float(np.dot(vp, vq) / norm)
    return 1.0 - max(-1.0, min(1.0, cos))


@dataclass
class CorpusReport:
    """Article and word counts for one corpus."""

    articles: int = 0
    words: int = 0

    def to_json_dict(self) -> dict:
        return {"articles": self.articles, "words": self.words}


def summarize(corpus: Iterable[CleanArticle]) -> CorpusReport:
    report = CorpusReport()
    for article in corpus:
        report.articles += 1
        report.words += article.word_count
    return report


def report(before: Sequence[CleanArticle], after: Sequence[CleanArticle]) -> dict:
    """Before/after counts with reduction percentages."""
    before_ids = {a.page_id for a in before}
    stray = [a.page_id for a in after if a.page_id not in before_ids]
    if stray:
        logger.warning("after-corpus has %d articles missing from before-corpus "
                       "(first: %s)", len(stray), stray[:3])
    b = summarize(before)
    a = summarize(after)
    return {
        "before": b.to_json_dict(),
        "after": a.to_json_dict(),
        "reduction": {
            "articles_pct": _pct(b.articles - a.articles, b.articles),
            "words_pct": _pct(b.words - a.words, b.words),
        },
    }


def _pct(part: int, whole: int) -> float:
    return round(100.0 * part / whole, 2) if whole else 0.0


def render_table(rep: dict) -> str:
    """Plain-text table of a before/after report."""
    rows = [
        ("", "Articles", "Words"),
        ("Before", f"{rep['before']['articles']:,}", f"{rep['before']['words']:,}"),
        ("After", f"{rep['after']['articles']:,}", f"{rep['after']['words']:,}"),
        ("Reduction", f"{rep['reduction']['articles_pct']}%",
         f"{rep['reduction']['words_pct']}%"),
    ]
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
             for row in rows]
    return "\n".join(lines)
