"""Tokenization, vocabulary construction, and prefix-vector encoding.

Articles become fixed-length integer vectors: lowercase tokens, digit
runs collapsed to a "0" placeholder, rare tokens dropped from the
vocabulary, index 0 reserved for unknowns, and only the first 500
tokens encoded. Long articles (over 2,000 words) skip encoding but stay
in the corpus.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .jsonl import dumps, read_records
from .records import CleanArticle, EncodedArticle

DEFAULT_MIN_FREQ = 3
DEFAULT_MAX_WORDS = 2000
DEFAULT_PREFIX = 500

_DIGIT_RUN = re.compile(r"\d+")
_TOKEN = re.compile(r"[^\W\d_]+|\d+|\S")


def tokenize(text: str) -> list[str]:
    """Lowercased word/symbol tokens with digit runs collapsed to "0"."""
    text = _DIGIT_RUN.sub("0", text.lower())
    return _TOKEN.findall(text)


def iter_tokens(text: str, limit: int | None = None) -> Iterator[str]:
    """Streaming tokenize, stopping after limit tokens when given."""
    text = _DIGIT_RUN.sub("0", text.lower())
    for i, m in enumerate(_TOKEN.finditer(text)):
        if limit is not None and i >= limit:
            return
        yield m.group(0)


@dataclass
class Vocabulary:
    """Dense token→index map built from corpus frequencies.

    Index 0 is the unknown token; real tokens occupy 1..V ordered by
    descending frequency, ties broken lexicographically.
    """

    token_to_index: dict[str, int] = field(default_factory=dict)
    frequencies: dict[str, int] = field(default_factory=dict)
    min_freq: int = DEFAULT_MIN_FREQ

    def __len__(self) -> int:
        return len(self.token_to_index)

    def lookup(self, token: str) -> int:
        return self.token_to_index.get(token, 0)

    @classmethod
    def from_counts(cls, counts: Counter, min_freq: int = DEFAULT_MIN_FREQ) -> "Vocabulary":
        kept = {t: c for t, c in counts.items() if c >= min_freq}
        ordered = sorted(kept, key=lambda t: (-kept[t], t))
        return cls(
            token_to_index={t: i for i, t in enumerate(ordered, start=1)},
            frequencies=kept,
            min_freq=min_freq,
        )

    def save(self, path: str | Path) -> None:
        payload = {t: [i, self.frequencies[t]] for t, i in self.token_to_index.items()}
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, ensure_ascii=False, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        vocab = cls()
        for token, (index, freq) in payload.items():
            vocab.token_to_index[token] = index
            vocab.frequencies[token] = freq
        return vocab


def build_vocabulary(articles: Iterable[CleanArticle],
                     min_freq: int = DEFAULT_MIN_FREQ) -> Vocabulary:
    """Count tokens across the dataset and keep those at min_freq or above."""
    counts: Counter = Counter()
    for article in articles:
        counts.update(tokenize(article.text))
    return Vocabulary.from_counts(counts, min_freq)


def encode_article(article: CleanArticle, vocab: Vocabulary,
                   max_words: int = DEFAULT_MAX_WORDS,
                   prefix: int = DEFAULT_PREFIX) -> EncodedArticle | None:
    """Map the article's opening tokens to vocabulary indices.

    Articles longer than max_words (whitespace words) are not encoded at
    all; they stay in the corpus but never enter similarity checking.
    """
    if article.word_count > max_words:
        return None
    vector = [vocab.lookup(tok) for tok in iter_tokens(article.text, prefix)]
    return EncodedArticle(page_id=article.page_id, vector=vector,
                          categories=list(article.categories))


def encode_corpus(articles: Iterable[CleanArticle], vocab: Vocabulary,
                  max_words: int = DEFAULT_MAX_WORDS,
                  prefix: int = DEFAULT_PREFIX) -> Iterator[EncodedArticle]:
    for article in articles:
        encoded = encode_article(article, vocab, max_words, prefix)
        if encoded is not None:
            yield encoded


def write_encoded(records: Iterable[EncodedArticle], out: str | Path) -> int:
    """One JSONL line per encoded article; returns the line count."""
    count = 0
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(dumps(record.to_json_dict()))
            fh.write("\n")
            count += 1
    return count


def read_encoded(path: str | Path) -> Iterator[EncodedArticle]:
    for obj in read_records(path):
        yield EncodedArticle.from_json_dict(obj)
