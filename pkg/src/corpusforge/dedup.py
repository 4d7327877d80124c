"""Near-duplicate detection and corpus pruning.

Each encoded article's index vector becomes a set of contiguous
trigrams; MinHash signatures over those sets estimate Jaccard overlap
as the fraction of matching signature positions. Within every category
bucket all pairs are compared, each article keeps its top three scores
above the threshold, the zero-padded average of those scores forms one
pooled curve, and articles above the curve's knee leave the corpus.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import ConsistencyError
from .jsonl import dumps, read_records
from .knee import find_knee
from .records import Bucket, CleanArticle, EncodedArticle, KneeResult, SimilarityRecord

DEFAULT_PERMS = 128
DEFAULT_THRESHOLD = 0.5
DEFAULT_SEED = 42

# Mersenne prime keeps mixer products inside uint64 for vectorization.
_PRIME = np.uint64((1 << 31) - 1)
_SENTINEL = np.uint64(1 << 31)  # above any h value; marks an empty set

logger = logging.getLogger(__name__)


@dataclass
class MinHashSignature:
    """Per-permutation minima for one trigram set."""

    values: np.ndarray
    seed: int

    @property
    def empty(self) -> bool:
        return bool(self.values[0] == _SENTINEL)

    def to_json_dict(self, page_id: int) -> dict:
        return {"id": page_id, "sig": [int(v) for v in self.values], "seed": self.seed}


def trigram_set(vector: list[int]) -> set[tuple[int, int, int]]:
    """All contiguous index triples; shorter vectors give the empty set."""
    return {tuple(vector[i:i + 3]) for i in range(len(vector) - 2)}


class PermutationFamily:
    """128 multiply-add mixers over one strong base hash, seed-derived."""

    def __init__(self, perms: int = DEFAULT_PERMS, seed: int = DEFAULT_SEED):
        self.perms = perms
        self.seed = seed
        rng = np.random.default_rng(seed)
        p = int(_PRIME)
        self.a = rng.integers(1, p, size=perms, dtype=np.uint64)
        self.b = rng.integers(0, p, size=perms, dtype=np.uint64)
        self._key = seed.to_bytes(8, "little", signed=True)

    def base_hash(self, trigram: tuple[int, ...]) -> int:
        raw = b"".join(v.to_bytes(8, "little", signed=True) for v in trigram)
        digest = hashlib.blake2b(raw, digest_size=8, key=self._key).digest()
        return int.from_bytes(digest, "little")

    def signature(self, trigrams: set[tuple[int, int, int]]) -> MinHashSignature:
        if not trigrams:
            return MinHashSignature(
                values=np.full(self.perms, _SENTINEL, dtype=np.uint64), seed=self.seed)
        base = np.fromiter((self.base_hash(t) for t in sorted(trigrams)),
                           dtype=np.uint64, count=len(trigrams))
        base %= _PRIME
        # (perms, n) mixer table reduced to per-permutation minima
        table = (self.a[:, None] * base[None, :] + self.b[:, None]) % _PRIME
        return MinHashSignature(values=table.min(axis=1), seed=self.seed)


def minhash(trigrams: set[tuple[int, int, int]], seed: int = DEFAULT_SEED,
            perms: int = DEFAULT_PERMS) -> MinHashSignature:
    """Signature of one trigram set under the seed's permutation family."""
    return PermutationFamily(perms=perms, seed=seed).signature(trigrams)


def signature_similarity(a: MinHashSignature, b: MinHashSignature) -> float:
    """Fraction of matching positions; sentinel signatures match nothing."""
    if a.seed != b.seed or a.values.shape != b.values.shape:
        raise ValueError("signatures from different families are not comparable")
    if a.empty or b.empty:
        return 0.0
    return float(np.mean(a.values == b.values))


def compute_signatures(records: Iterable[EncodedArticle], perms: int = DEFAULT_PERMS,
                       seed: int = DEFAULT_SEED) -> dict[int, MinHashSignature]:
    """Signature per article id, derived only from (vector, seed)."""
    family = PermutationFamily(perms=perms, seed=seed)
    return {r.page_id: family.signature(trigram_set(r.vector)) for r in records}


def score_buckets(buckets: Iterable[Bucket], signatures: dict[int, MinHashSignature],
                  threshold: float = DEFAULT_THRESHOLD) -> dict[int, SimilarityRecord]:
    """Top-3 above-threshold similarity per article across all its buckets.

    Every bucket member gets a record (possibly with no scores). A pair
    recorded once is never recorded again from another bucket.
    """
    records: dict[int, SimilarityRecord] = {}
    recorded: set[tuple[int, int]] = set()
    for bucket in buckets:
        ids = bucket.members
        missing = [i for i in ids if i not in signatures]
        if missing:
            raise ConsistencyError(
                f"bucket {bucket.category}/{bucket.chunk_index} references "
                f"ids without signatures: {missing[:5]}")
        for page_id in ids:
            records.setdefault(page_id, SimilarityRecord(page_id=page_id))
        sigs = np.stack([signatures[i].values for i in ids])
        present = np.array([not signatures[i].empty for i in ids])
        n = len(ids)
        for row in range(n - 1):
            if not present[row]:
                continue
            sims = np.mean(sigs[row + 1:] == sigs[row], axis=1)
            sims[~present[row + 1:]] = 0.0
            for offset in np.flatnonzero(sims > threshold):
                col = row + 1 + int(offset)
                pair = (min(ids[row], ids[col]), max(ids[row], ids[col]))
                if pair in recorded:
                    continue
                recorded.add(pair)
                score = float(sims[offset])
                _push_score(records[ids[row]], score)
                _push_score(records[ids[col]], score)
    return records


def _push_score(record: SimilarityRecord, score: float) -> None:
    record.top_scores.append(score)
    record.top_scores.sort(reverse=True)
    del record.top_scores[3:]


def aggregate_score(record: SimilarityRecord) -> float:
    """Mean of the top three scores, missing slots taken as zero."""
    return record.aggregate


def knee_from_records(records: dict[int, SimilarityRecord],
                      sensitivity: float = 1.0) -> KneeResult:
    """Knee over the pooled aggregate list of every scored article."""
    return find_knee([r.aggregate for r in records.values()], sensitivity)


def prune_corpus(clean: Iterable[CleanArticle],
                 records: dict[int, SimilarityRecord],
                 knee: KneeResult) -> tuple[list[CleanArticle], list[SimilarityRecord]]:
    """Split the corpus into kept articles and the removal manifest.

    Only articles whose aggregate strictly exceeds the knee cutoff go;
    unscored articles always stay. Without a knee nothing is removed.
    """
    if not knee.found:
        logger.warning("no knee found in the score curve; keeping everything")
        kept_all = list(clean)
        return kept_all, []
    kept: list[CleanArticle] = []
    removed: list[SimilarityRecord] = []
    for article in clean:
        record = records.get(article.page_id)
        if record is not None and record.aggregate > knee.cutoff:
            removed.append(record)
        else:
            kept.append(article)
    return kept, removed


def write_signatures(signatures: dict[int, MinHashSignature], out: str | Path) -> int:
    count = 0
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for page_id in sorted(signatures):
            fh.write(dumps(signatures[page_id].to_json_dict(page_id)))
            fh.write("\n")
            count += 1
    return count


def read_signatures(path: str | Path) -> dict[int, MinHashSignature]:
    out: dict[int, MinHashSignature] = {}
    for obj in read_records(path):
        out[obj["id"]] = MinHashSignature(
            values=np.asarray(obj["sig"], dtype=np.uint64), seed=obj["seed"])
    return out


def write_manifest(removed: list[SimilarityRecord], out: str | Path) -> int:
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for record in sorted(removed, key=lambda r: r.page_id):
            fh.write(dumps({"id": record.page_id, "aggregate": record.aggregate,
                            "top_scores": record.top_scores}))
            fh.write("\n")
    return len(removed)


def read_manifest(path: str | Path) -> Iterator[dict]:
    yield from read_records(path)
