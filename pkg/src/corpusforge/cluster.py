"""Category-based comparison groups.

Articles sharing a category are compared against each other only;
oversized groups are chunked so the pair count stays bounded.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator

from .jsonl import dumps, read_records
from .records import Bucket, EncodedArticle

DEFAULT_MAX_BUCKET = 3000


def bucket_by_category(records: Iterable[EncodedArticle],
                       max_bucket: int = DEFAULT_MAX_BUCKET) -> list[Bucket]:
    """Group article ids by category, chunking and dropping singletons.

    An article with k categories lands in k groups. Groups over
    max_bucket split into consecutive input-order chunks; buckets left
    with fewer than two members yield no pairs and are dropped.
    """
    groups: dict[str, list[int]] = {}
    for record in records:
        for category in record.categories:
            groups.setdefault(category, []).append(record.page_id)
    buckets: list[Bucket] = []
    for category, members in groups.items():
        chunks = [members[i:i + max_bucket] for i in range(0, len(members), max_bucket)]
        for chunk_index, chunk in enumerate(chunks):
            if len(chunk) >= 2:
                buckets.append(Bucket(category=category, chunk_index=chunk_index,
                                      members=chunk))
    return buckets


def pair_count(buckets: Iterable[Bucket]) -> int:
    """Total pairwise comparisons implied by the buckets (cost preview)."""
    return sum(len(b.members) * (len(b.members) - 1) // 2 for b in buckets)


def write_buckets(buckets: list[Bucket], out: str | Path) -> int:
    """Bucket manifest as JSONL, closed by a summary line with the pair count."""
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for bucket in buckets:
            fh.write(dumps({"category": bucket.category, "chunk": bucket.chunk_index,
                            "members": bucket.members}))
            fh.write("\n")
        fh.write(dumps({"buckets": len(buckets), "total_pairs": pair_count(buckets)}))
        fh.write("\n")
    return len(buckets)


def read_buckets(path: str | Path) -> tuple[list[Bucket], dict]:
    """Read a bucket manifest; returns (buckets, summary)."""
    buckets: list[Bucket] = []
    summary: dict = {}
    for obj in read_records(path):
        if "category" in obj:
            buckets.append(Bucket(category=obj["category"], chunk_index=obj["chunk"],
                                  members=list(obj["members"])))
        else:
            summary = obj
    return buckets, summary
