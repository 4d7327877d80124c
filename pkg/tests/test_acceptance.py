"""Acceptance gate: one test per shipping criterion, each printing a
PASS line with its measured time (run with -s to see them).

Budgets are wall-clock upper bounds; every criterion states its own
tolerance inline.
"""

import json
import random
import time
from pathlib import Path

import numpy as np
import pytest

from corpusforge.cleaning import clean_article
from corpusforge.config import CleanConfig
from corpusforge.dedup import (
    MinHashSignature,
    PermutationFamily,
    aggregate_score,
    prune_corpus,
    read_signatures,
    score_buckets,
    signature_similarity,
)
from corpusforge.cluster import read_buckets
from corpusforge.ingest import iter_pages, serialize_pages
from corpusforge.knee import find_knee
from corpusforge.records import Bucket, CleanArticle, KneeResult, RawPage, SimilarityRecord
from corpusforge.stats import cosine_delta, delta_axis, profile

from conftest import run_pipeline_on_dump
import synth

GOLDEN_ROOT = Path(__file__).parent / "data" / "golden"
RESIDUE = ("{{", "}}", "[[", "]]", "{|", "<!--")


def test_criterion_1_golden_cleaning_suite():
    configs = {
        "wikipedia": CleanConfig(language="sr", project="wikipedia"),
        "wikiquote": CleanConfig(language="sr", project="wikiquote",
                                 include_quote_lead=True),
    }
    start = time.perf_counter()
    checked = 0
    for project, config in configs.items():
        for wiki_path in sorted((GOLDEN_ROOT / project).glob("*.wiki")):
            wiki = wiki_path.read_text(encoding="utf-8")
            expected = wiki_path.with_suffix(".txt").read_text(encoding="utf-8")
            page = RawPage(page_id=1, title=wiki_path.stem, namespace=0, text=wiki)
            article = clean_article(page, config)
            assert article is not None, wiki_path.stem
            assert article.text == expected, wiki_path.stem
            checked += 1
    elapsed = time.perf_counter() - start
    assert checked >= 30
    assert elapsed < 5.0
    print(f"\nPASS criterion 1: {checked} golden fixtures exact-match ({elapsed:.2f}s < 5s)")


def test_criterion_2_no_residue_fuzz():
    rng = random.Random(1307)
    config = CleanConfig(language="sr", project="wikipedia")
    start = time.perf_counter()
    offenders = []
    for i in range(1000):
        wiki = synth.fuzz_article(rng, depth=10)
        article = clean_article(
            RawPage(page_id=i, title=f"F{i}", namespace=0, text=wiki), config)
        if article is None:
            continue
        for marker in RESIDUE:
            if marker in article.text:
                offenders.append((i, marker))
    elapsed = time.perf_counter() - start
    assert offenders == []
    assert elapsed < 60.0
    print(f"\nPASS criterion 2: 1000 fuzzed articles, zero markup residue ({elapsed:.2f}s < 60s)")


def test_criterion_3_minhash_accuracy():
    start = time.perf_counter()
    rng = np.random.default_rng(9)
    family = PermutationFamily(seed=42)
    worst = 0.0
    pairs = 0
    for j10 in range(1, 10):
        planted = j10 / 10.0
        reps = 23 if j10 <= 2 else 22
        estimates = []
        for _ in range(reps):
            a, b = synth.planted_pair(rng, planted)
            exact = len(a & b) / len(a | b)   # brute-force oracle
            estimate = signature_similarity(family.signature(a), family.signature(b))
            assert abs(estimate - exact) <= 0.12, (planted, exact, estimate)
            worst = max(worst, abs(estimate - exact))
            estimates.append(estimate)
            pairs += 1
        band = 3 * np.sqrt(planted * (1 - planted) / 128)
        assert abs(np.mean(estimates) - planted) <= band, planted
    elapsed = time.perf_counter() - start
    assert pairs == 200
    assert elapsed < 10.0
    print(f"\nPASS criterion 3: 200 pairs, worst |est-J|={worst:.4f} <= 0.12, "
          f"means in 3-sigma bands ({elapsed:.2f}s < 10s)")


def test_criterion_4_aggregation_rules():
    assert aggregate_score(SimilarityRecord(1, [0.9])) == pytest.approx(0.3, abs=1e-15)
    assert aggregate_score(SimilarityRecord(1, [])) == 0.0
    # a pair matching in exactly half the positions sits AT the threshold
    base = np.arange(128, dtype=np.uint64)
    shifted = base.copy()
    shifted[64:] += 10_000
    a = MinHashSignature(values=base, seed=42)
    b = MinHashSignature(values=shifted, seed=42)
    assert signature_similarity(a, b) == 0.5
    records = score_buckets([Bucket("X", 0, [1, 2])], {1: a, 2: b}, threshold=0.5)
    assert records[1].top_scores == [] and records[2].top_scores == []
    print("\nPASS criterion 4: [0.9] -> 0.3 and [] -> 0.0 exact; 0.5 pairs not recorded")


def _population_aggregates(layout, config):
    signatures = read_signatures(layout.signatures)
    buckets, _ = read_buckets(layout.buckets)
    records = score_buckets(buckets, signatures, config.threshold)
    templated = [records[i].aggregate for i in synth.TEMPLATED_IDS if i in records]
    distinct = [records[i].aggregate for i in synth.DISTINCT_IDS if i in records]
    return templated, distinct


def test_criterion_5_synthetic_dedup_end_to_end(mini_run):
    config, layout, summary = mini_run
    elapsed = sum(info.get("duration_s", 0.0) for info in summary["stages"].values())
    removed_ids = {row["id"] for row in map(
        json.loads, layout.manifest.read_text(encoding="utf-8").splitlines())}
    kept_ids = {row["id"] for row in map(
        json.loads, layout.corpus.read_text(encoding="utf-8").splitlines())}
    templated_removed = len(removed_ids & synth.TEMPLATED_IDS)
    distinct_removed = len(removed_ids & synth.DISTINCT_IDS)
    assert templated_removed >= 0.95 * len(synth.TEMPLATED_IDS)
    assert distinct_removed <= 0.05 * len(synth.DISTINCT_IDS)
    assert kept_ids | removed_ids == synth.TEMPLATED_IDS | synth.DISTINCT_IDS

    cutoff = summary["stages"]["dedup"]["knee"]["cutoff"]
    assert summary["stages"]["dedup"]["knee"]["found"]
    templated, distinct = _population_aggregates(layout, config)
    assert max(distinct) <= cutoff < min(templated)
    assert elapsed < 120.0
    print(f"\nPASS criterion 5: {templated_removed}/500 templated removed, "
          f"{distinct_removed}/500 distinct removed, cutoff {cutoff:.3f} separates "
          f"populations ({elapsed:.2f}s < 120s)")


def test_criterion_6_knee_detection():
    scores = np.concatenate([np.linspace(0.0, 0.1, 900), np.linspace(0.7, 1.0, 100)])
    knee = find_knee(scores)
    assert knee.found
    assert 0.1 <= knee.cutoff <= 0.7

    ramp = find_knee(np.linspace(0.0, 1.0, 1000))
    assert not ramp.found
    articles = [CleanArticle(page_id=i, title="T", url="u", text="t", categories=[],
                             word_count=1, cyrillic_ratio=0.0) for i in range(10)]
    records = {i: SimilarityRecord(i, [0.9, 0.9, 0.9]) for i in range(10)}
    kept, removed = prune_corpus(articles, records, ramp)
    assert len(kept) == 10 and removed == []
    print(f"\nPASS criterion 6: two-regime cutoff {knee.cutoff:.3f} in [0.1, 0.7]; "
          "linear ramp fails open, nothing removed")


def test_criterion_7_mini_dump_ingestion(tmp_path):
    xml, truth = synth.ingest_dump_xml()
    dump = tmp_path / "dump.xml"
    dump.write_text(xml, encoding="utf-8")
    from corpusforge.config import load_language_table
    keywords = load_language_table("sr").redirect_keywords
    out = tmp_path / "raw.jsonl"
    stats = serialize_pages(iter_pages(dump), out, redirect_keywords=keywords)
    rows = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert [r["id"] for r in rows] == truth["valid_ids"]
    assert stats.pages_read == truth["pages_read"]
    assert stats.retained == truth["retained"]
    assert stats.skipped_redirect == truth["skipped_redirect"]
    assert stats.skipped_namespace == truth["skipped_namespace"]
    assert stats.skipped_too_short == truth["skipped_too_short"]
    print(f"\nPASS criterion 7: 20-page dump -> {stats.retained} articles, "
          "skip counters match ground truth")


def test_criterion_8_worker_count_determinism(tmp_path, mini_dump_path, mini_run):
    _, serial_layout, _ = mini_run
    _, parallel_layout, _ = run_pipeline_on_dump(
        mini_dump_path, tmp_path / "work8", workers=8)
    serial = serial_layout.corpus.read_bytes()
    parallel = parallel_layout.corpus.read_bytes()
    assert serial == parallel
    print("\nPASS criterion 8: workers=1 and workers=8 produce byte-identical corpus "
          f"({len(serial)} bytes)")


def test_criterion_9_stats(mini_run):
    _, layout, _ = mini_run
    from corpusforge.pipeline import read_clean_articles

    # identity: a corpus is at distance zero from itself
    kept = read_clean_articles(layout.corpus)
    p = profile(kept, k=100)
    assert cosine_delta(p, p) <= 1e-12

    # scale invariance: multiplying every count by 10 changes nothing
    before = read_clean_articles(layout.clean)
    q = profile(before, k=100)
    scaled = [CleanArticle(page_id=a.page_id, title=a.title, url=a.url,
                           text=" ".join([a.text] * 10), categories=a.categories,
                           word_count=a.word_count * 10,
                           cyrillic_ratio=a.cyrillic_ratio) for a in kept]
    p10 = profile(scaled, k=100)
    axis = delta_axis(p, q, mode="union")
    assert cosine_delta(p, q, axis) == pytest.approx(
        cosine_delta(p10, q, axis), abs=1e-12)

    # conservation: kept + removed = before
    n_before = len(before)
    n_after = len(kept)
    n_removed = len(layout.manifest.read_text(encoding="utf-8").splitlines())
    assert n_after + n_removed == n_before
    print(f"\nPASS criterion 9: self-distance 0, scale invariance x10, "
          f"{n_after} + {n_removed} = {n_before} conserved")
