"""Command-line entry point.

One subcommand per pipeline stage plus `run` for the whole flow.
Exit codes: 0 success, 2 configuration or usage error, 3 stage failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import cluster as cluster_mod
from . import dedup as dedup_mod
from . import encode as encode_mod
from . import ingest as ingest_mod
from . import stats as stats_mod
from .cleaning import clean_stream
from .config import (CleanConfig, PipelineConfig, load_language_table,
                     load_pipeline_config, override)
from .errors import ConfigError, CorpusForgeError
from .jsonl import write_records
from .pipeline import STAGES, read_clean_articles, read_raw_pages, run
from .records import PROJECTS, DumpDescriptor


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corpusforge",
        description="Build cleaned, deduplicated plain-text corpora from "
                    "MediaWiki XML dumps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", help="download a dump archive")
    p.add_argument("--lang", required=True, help="ISO 639-1 language code")
    p.add_argument("--project", default="wikipedia", choices=PROJECTS)
    p.add_argument("--version", required=True, help="dump date code YYYYMMDD")
    p.add_argument("--source-url", default="https://dumps.wikimedia.org")
    p.add_argument("--dest", type=Path, default=Path("."),
                   help="target directory or file path")

    p = sub.add_parser("ingest", help="extract main-namespace articles to JSONL")
    p.add_argument("archive", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--min-chars", type=int, default=ingest_mod.MIN_CHARS)
    p.add_argument("--lang", default="default",
                   help="language whose redirect keywords apply")

    p = sub.add_parser("clean", help="convert wikitext to plain text")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--config", type=Path, help="cleaning config file (JSON/TOML)")
    p.add_argument("--lang", help="language code (alternative to --config)")
    p.add_argument("--project", choices=PROJECTS, help="project (with --lang)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timeout", type=int, default=60,
                   help="per-article seconds before the article is dropped")

    p = sub.add_parser("encode", help="build vocabulary and prefix vectors")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--vocab", type=Path, required=True)
    p.add_argument("--min-freq", type=int, default=encode_mod.DEFAULT_MIN_FREQ)
    p.add_argument("--max-words", type=int, default=encode_mod.DEFAULT_MAX_WORDS)
    p.add_argument("--prefix", type=int, default=encode_mod.DEFAULT_PREFIX)

    p = sub.add_parser("cluster", help="bucket encoded articles by category")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--max-bucket", type=int, default=cluster_mod.DEFAULT_MAX_BUCKET)

    p = sub.add_parser("dedup", help="remove near-duplicate articles")
    p.add_argument("clean", type=Path)
    p.add_argument("encoded", type=Path)
    p.add_argument("buckets", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--manifest", type=Path, help="removed-article manifest path")
    p.add_argument("--signatures", type=Path, help="persist signatures here")
    p.add_argument("--perms", type=int, default=dedup_mod.DEFAULT_PERMS)
    p.add_argument("--threshold", type=float, default=dedup_mod.DEFAULT_THRESHOLD)
    p.add_argument("--seed", type=int, default=dedup_mod.DEFAULT_SEED)
    p.add_argument("--sensitivity", type=float, default=1.0)

    p = sub.add_parser("stats", help="before/after corpus report")
    p.add_argument("before", type=Path)
    p.add_argument("after", type=Path)
    p.add_argument("--top", type=int, default=stats_mod.DEFAULT_TOP_K)
    p.add_argument("--report", type=Path, help="write the report JSON here")

    p = sub.add_parser("delta", help="cosine delta distance between two corpora")
    p.add_argument("first", type=Path)
    p.add_argument("second", type=Path)
    p.add_argument("--top", type=int, default=stats_mod.DEFAULT_TOP_K)
    p.add_argument("--axis", choices=("first", "union"), default="first")
    p.add_argument("--raw", action="store_true",
                   help="plain relative-frequency cosine, no z-scoring")

    p = sub.add_parser("run", help="run the staged pipeline from one config")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--stages", help="comma-separated subset of: " + ",".join(STAGES))
    p.add_argument("--workdir", type=Path,
                   help="override the config working directory")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"corpusforge: config error: {exc}", file=sys.stderr)
        return 2
    except CorpusForgeError as exc:
        print(f"corpusforge: {exc}", file=sys.stderr)
        return 3


def _dispatch(args: argparse.Namespace) -> int:
    handlers = {
        "fetch": _cmd_fetch,
        "ingest": _cmd_ingest,
        "clean": _cmd_clean,
        "encode": _cmd_encode,
        "cluster": _cmd_cluster,
        "dedup": _cmd_dedup,
        "stats": _cmd_stats,
        "delta": _cmd_delta,
        "run": _cmd_run,
    }
    return handlers[args.command](args)


def _cmd_fetch(args) -> int:
    descriptor = DumpDescriptor(language_code=args.lang, project=args.project,
                                dump_version=args.version,
                                source_url=args.source_url)
    path = ingest_mod.fetch_dump(descriptor, args.dest)
    print(path)
    return 0


def _cmd_ingest(args) -> int:
    table = load_language_table(args.lang)
    pages = ingest_mod.iter_pages(args.archive)
    stats = ingest_mod.serialize_pages(pages, args.output,
                                       min_chars=args.min_chars,
                                       redirect_keywords=table.redirect_keywords)
    print(json.dumps(stats.to_json_dict()))
    return 0


def _cmd_clean(args) -> int:
    if args.config:
        from .config import load_clean_config
        config = load_clean_config(args.config)
    elif args.lang:
        config = CleanConfig(language=args.lang,
                             project=args.project or "wikipedia",
                             timeout_s=args.timeout)
    else:
        raise ConfigError("clean needs --config or --lang")
    if args.timeout != 60:
        from dataclasses import replace
        config = replace(config, timeout_s=args.timeout)
    articles, stats = clean_stream(read_raw_pages(args.input), config,
                                   workers=args.workers)
    write_records(args.output, (a.to_json_dict() for a in articles))
    print(json.dumps({"cleaned": stats.cleaned,
                      "dropped_empty": stats.dropped_empty,
                      "dropped_timeout": stats.dropped_timeout}))
    return 0


def _cmd_encode(args) -> int:
    vocab = encode_mod.build_vocabulary(read_clean_articles(args.input),
                                        args.min_freq)
    vocab.save(args.vocab)
    count = encode_mod.write_encoded(
        encode_mod.encode_corpus(read_clean_articles(args.input), vocab,
                                 args.max_words, args.prefix),
        args.output)
    print(json.dumps({"vocabulary": len(vocab), "encoded": count}))
    return 0


def _cmd_cluster(args) -> int:
    buckets = cluster_mod.bucket_by_category(
        encode_mod.read_encoded(args.input), args.max_bucket)
    cluster_mod.write_buckets(buckets, args.output)
    print(json.dumps({"buckets": len(buckets),
                      "pairs": cluster_mod.pair_count(buckets)}))
    return 0


def _cmd_dedup(args) -> int:
    signatures = dedup_mod.compute_signatures(
        encode_mod.read_encoded(args.encoded), args.perms, args.seed)
    if args.signatures:
        dedup_mod.write_signatures(signatures, args.signatures)
    buckets, _ = cluster_mod.read_buckets(args.buckets)
    records = dedup_mod.score_buckets(buckets, signatures, args.threshold)
    knee = dedup_mod.knee_from_records(records, args.sensitivity)
    kept, removed = dedup_mod.prune_corpus(read_clean_articles(args.clean),
                                           records, knee)
    write_records(args.output, (a.to_json_dict() for a in kept))
    if args.manifest:
        dedup_mod.write_manifest(removed, args.manifest)
    print(json.dumps({"kept": len(kept), "removed": len(removed),
                      "knee_found": knee.found, "cutoff": knee.cutoff}))
    return 0


def _cmd_stats(args) -> int:
    before = read_clean_articles(args.before)
    after = read_clean_articles(args.after)
    rep = stats_mod.report(before, after)
    try:
        p = stats_mod.profile(before, args.top)
        q = stats_mod.profile(after, args.top)
        rep["cosine_delta"] = stats_mod.cosine_delta(p, q)
    except ValueError:
        rep["cosine_delta"] = None
    if args.report:
        args.report.write_text(json.dumps(rep, indent=2, ensure_ascii=False) + "\n",
                               encoding="utf-8")
    print(stats_mod.render_table(rep))
    if rep["cosine_delta"] is not None:
        print(f"cosine delta: {rep['cosine_delta']:.4f}")
    return 0


def _cmd_delta(args) -> int:
    p = stats_mod.profile(read_clean_articles(args.first), args.top)
    q = stats_mod.profile(read_clean_articles(args.second), args.top)
    axis = stats_mod.delta_axis(p, q, args.axis)
    value = stats_mod.cosine_delta(p, q, reference_axis=axis,
                                   standardize=not args.raw)
    print(f"{value:.6f}")
    return 0


def _cmd_run(args) -> int:
    workdir = args.workdir or os.environ.get("CORPUSFORGE_WORKDIR")
    config = load_pipeline_config(args.config)
    config = override(config, workdir=Path(workdir) if workdir else None)
    stages = args.stages.split(",") if args.stages else None
    summary = run(config, stages)
    print(json.dumps(summary, ensure_ascii=False))
    return 0


if __name__ == "__main__":
    sys.exit(main())
