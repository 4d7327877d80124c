"""End-to-end orchestration over staged JSONL intermediates.

Stages run in a fixed order, each reading the previous stage's file and
writing its own. A stage is skipped when its outputs exist and a stamp
shows both its inputs and its parameters are unchanged. Failed stages
leave their partial output under quarantine/, never in place.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from pathlib import Path

from . import cluster as cluster_mod
from . import dedup as dedup_mod
from . import encode as encode_mod
from . import ingest as ingest_mod
from . import stats as stats_mod
from .cleaning import clean_stream
from .config import PipelineConfig
from .errors import CorpusForgeError, StageError
from .jsonl import read_records, write_records
from .records import CleanArticle, RawPage

STAGES = ("fetch", "ingest", "clean", "encode", "cluster", "dedup", "stats")


@dataclass(frozen=True)
class Layout:
    """File locations for one pipeline run."""

    workdir: Path
    archive_name: str

    @property
    def archive(self) -> Path:
        return self.workdir / self.archive_name

    @property
    def raw(self) -> Path:
        return self.workdir / "raw.jsonl"

    @property
    def clean(self) -> Path:
        return self.workdir / "clean.jsonl"

    @property
    def vocab(self) -> Path:
        return self.workdir / "vocab.json"

    @property
    def encoded(self) -> Path:
        return self.workdir / "encoded.jsonl"

    @property
    def buckets(self) -> Path:
        return self.workdir / "buckets.jsonl"

    @property
    def signatures(self) -> Path:
        return self.workdir / "signatures.jsonl"

    @property
    def corpus(self) -> Path:
        return self.workdir / "corpus.jsonl"

    @property
    def manifest(self) -> Path:
        return self.workdir / "removed.jsonl"

    @property
    def report(self) -> Path:
        return self.workdir / "report.json"

    @property
    def summary(self) -> Path:
        return self.workdir / "summary.json"

    @property
    def stamps(self) -> Path:
        return self.workdir / "stamps"

    @property
    def quarantine(self) -> Path:
        return self.workdir / "quarantine"


def layout_for(config: PipelineConfig) -> Layout:
    return Layout(workdir=config.workdir, archive_name=config.descriptor.archive_name)


def _file_hash(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _params_hash(params: dict) -> str:
    return hashlib.sha256(json.dumps(params, sort_keys=True).encode()).hexdigest()


class _Stage:
    """One pipeline step: inputs, outputs, parameters, and a runner."""

    def __init__(self, name: str, inputs: list[Path], outputs: list[Path],
                 params: dict, runner):
        self.name = name
        self.inputs = inputs
        self.outputs = outputs
        self.params = params
        self.runner = runner

    def stamp_path(self, layout: Layout) -> Path:
        return layout.stamps / f"{self.name}.json"

    def is_cached(self, layout: Layout) -> bool:
        if not all(p.exists() for p in self.outputs):
            return False
        stamp_file = self.stamp_path(layout)
        if not stamp_file.exists():
            return False
        try:
            stamp = json.loads(stamp_file.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return False
        if stamp.get("params") != _params_hash(self.params):
            return False
        recorded = stamp.get("inputs", {})
        current = {str(p): _file_hash(p) for p in self.inputs if p.exists()}
        return recorded == current and len(current) == len(self.inputs)

    def write_stamp(self, layout: Layout) -> None:
        layout.stamps.mkdir(parents=True, exist_ok=True)
        stamp = {
            "params": _params_hash(self.params),
            "inputs": {str(p): _file_hash(p) for p in self.inputs},
        }
        self.stamp_path(layout).write_text(json.dumps(stamp, indent=2), encoding="utf-8")


def _quarantine_partials(layout: Layout, outputs: list[Path]) -> None:
    layout.quarantine.mkdir(parents=True, exist_ok=True)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    for out in outputs:
        tmp = out.with_suffix(out.suffix + ".tmp")
        if tmp.exists():
            tmp.replace(layout.quarantine / f"{out.name}.{stamp}")


def _promote(outputs: list[Path]) -> None:
    for out in outputs:
        tmp = out.with_suffix(out.suffix + ".tmp")
        if tmp.exists():
            tmp.replace(out)


def _tmp(path: Path) -> Path:
    return path.with_suffix(path.suffix + ".tmp")


def run(config: PipelineConfig, stages: list[str] | None = None) -> dict:
    """Execute the requested stages in order; returns the run summary."""
    requested = list(STAGES) if stages is None else list(stages)
    unknown = [s for s in requested if s not in STAGES]
    if unknown:
        raise StageError(unknown[0], f"unknown stage (choose from {', '.join(STAGES)})")
    layout = layout_for(config)
    layout.workdir.mkdir(parents=True, exist_ok=True)

    summary: dict = {"stages": {}, "workdir": str(layout.workdir)}
    for name in STAGES:
        if name not in requested:
            continue
        stage = _build_stage(name, config, layout)
        started = time.time()
        if stage.is_cached(layout):
            summary["stages"][name] = {"status": "cached"}
            continue
        missing = [str(p) for p in stage.inputs if not p.exists()]
        if missing:
            raise StageError(name, f"missing inputs: {', '.join(missing)}")
        try:
            extra = stage.runner() or {}
            _promote(stage.outputs)
            stage.write_stamp(layout)
        except CorpusForgeError:
            _quarantine_partials(layout, stage.outputs)
            raise
        except Exception as exc:
            _quarantine_partials(layout, stage.outputs)
            raise StageError(name, str(exc)) from exc
        entry = {"status": "ran", "duration_s": round(time.time() - started, 3)}
        entry.update(extra)
        summary["stages"][name] = entry

    layout.summary.write_text(json.dumps(summary, indent=2, ensure_ascii=False) + "\n",
                              encoding="utf-8")
    return summary


def _build_stage(name: str, config: PipelineConfig, layout: Layout) -> _Stage:
    builders = {
        "fetch": _fetch_stage,
        "ingest": _ingest_stage,
        "clean": _clean_stage,
        "encode": _encode_stage,
        "cluster": _cluster_stage,
        "dedup": _dedup_stage,
        "stats": _stats_stage,
    }
    return builders[name](config, layout)


def _fetch_stage(config: PipelineConfig, layout: Layout) -> _Stage:
    descriptor = config.descriptor

    def runner() -> dict:
        ingest_mod.fetch_dump(descriptor, layout.workdir)
        return {"archive": str(layout.archive)}

    return _Stage("fetch", inputs=[], outputs=[layout.archive],
                  params={"url": descriptor.dump_url}, runner=runner)


def _ingest_stage(config: PipelineConfig, layout: Layout) -> _Stage:
    table = config.clean_config().table

    def runner() -> dict:
        pages = ingest_mod.iter_pages(layout.archive)
        stats = ingest_mod.serialize_pages(
            pages, _tmp(layout.raw), min_chars=config.min_chars,
            redirect_keywords=table.redirect_keywords)
        return stats.to_json_dict()

    return _Stage("ingest", inputs=[layout.archive], outputs=[layout.raw],
                  params={"min_chars": config.min_chars,
                          "redirect_keywords": list(table.redirect_keywords)},
                  runner=runner)


def read_raw_pages(path: Path):
    for obj in read_records(path):
        yield RawPage(page_id=obj["id"], title=obj.get("title", ""), namespace=0,
                      text=obj.get("text", ""))


def read_clean_articles(path: Path) -> list[CleanArticle]:
    return [CleanArticle.from_json_dict(obj) for obj in read_records(path)]


def _clean_stage(config: PipelineConfig, layout: Layout) -> _Stage:
    clean_config = config.clean_config()

    def runner() -> dict:
        articles, stats = clean_stream(read_raw_pages(layout.raw), clean_config,
                                       workers=config.workers)
        write_records(_tmp(layout.clean), (a.to_json_dict() for a in articles))
        return {"cleaned": stats.cleaned, "dropped_empty": stats.dropped_empty,
                "dropped_timeout": stats.dropped_timeout}

    params = {"language": config.language, "project": config.project,
              "timeout_s": config.timeout_s, "version": config.version}
    return _Stage("clean", inputs=[layout.raw], outputs=[layout.clean],
                  params=params, runner=runner)


def _encode_stage(config: PipelineConfig, layout: Layout) -> _Stage:
    def runner() -> dict:
        vocab = encode_mod.build_vocabulary(read_clean_articles(layout.clean), config.min_freq)
        vocab.save(_tmp(layout.vocab))
        count = encode_mod.write_encoded(
            encode_mod.encode_corpus(read_clean_articles(layout.clean), vocab,
                                     config.max_words, config.prefix),
            _tmp(layout.encoded))
        return {"vocabulary": len(vocab), "encoded": count}

    params = {"min_freq": config.min_freq, "max_words": config.max_words,
              "prefix": config.prefix}
    return _Stage("encode", inputs=[layout.clean],
                  outputs=[layout.vocab, layout.encoded], params=params, runner=runner)


def _cluster_stage(config: PipelineConfig, layout: Layout) -> _Stage:
    def runner() -> dict:
        buckets = cluster_mod.bucket_by_category(
            encode_mod.read_encoded(layout.encoded), config.max_bucket)
        cluster_mod.write_buckets(buckets, _tmp(layout.buckets))
        return {"buckets": len(buckets), "pairs": cluster_mod.pair_count(buckets)}

    return _Stage("cluster", inputs=[layout.encoded], outputs=[layout.buckets],
                  params={"max_bucket": config.max_bucket}, runner=runner)


def _dedup_stage(config: PipelineConfig, layout: Layout) -> _Stage:
    def runner() -> dict:
        signatures = dedup_mod.compute_signatures(
            encode_mod.read_encoded(layout.encoded), config.perms, config.seed)
        dedup_mod.write_signatures(signatures, _tmp(layout.signatures))
        buckets, _ = cluster_mod.read_buckets(layout.buckets)
        records = dedup_mod.score_buckets(buckets, signatures, config.threshold)
        knee = dedup_mod.knee_from_records(records, config.knee_sensitivity)
        kept, removed = dedup_mod.prune_corpus(read_clean_articles(layout.clean), records, knee)
        write_records(_tmp(layout.corpus), (a.to_json_dict() for a in kept))
        dedup_mod.write_manifest(removed, _tmp(layout.manifest))
        return {"kept": len(kept), "removed": len(removed),
                "knee": {"found": knee.found, "cutoff": knee.cutoff}}

    params = {"perms": config.perms, "threshold": config.threshold,
              "seed": config.seed, "sensitivity": config.knee_sensitivity}
    return _Stage("dedup", inputs=[layout.clean, layout.encoded, layout.buckets],
                  outputs=[layout.signatures, layout.corpus, layout.manifest],
                  params=params, runner=runner)


def _stats_stage(config: PipelineConfig, layout: Layout) -> _Stage:
    def runner() -> dict:
        before = read_clean_articles(layout.clean)
        after = read_clean_articles(layout.corpus)
        rep = stats_mod.report(before, after)
        try:
            p = stats_mod.profile(before, config.top_k)
            q = stats_mod.profile(after, config.top_k)
            rep["cosine_delta"] = stats_mod.cosine_delta(p, q)
        except ValueError:
            rep["cosine_delta"] = None
        _tmp(layout.report).write_text(
            json.dumps(rep, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        return {"articles_after": rep["after"]["articles"],
                "cosine_delta": rep["cosine_delta"]}

    return _Stage("stats", inputs=[layout.clean, layout.corpus],
                  outputs=[layout.report], params={"top_k": config.top_k},
                  runner=runner)
