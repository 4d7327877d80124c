"""Shared fixtures: synthetic dumps and one fully materialized pipeline run."""

from __future__ import annotations

import pytest

from corpusforge.config import PipelineConfig
from corpusforge.pipeline import Layout, layout_for, run

import synth


@pytest.fixture(scope="session")
def mini_dump_path(tmp_path_factory):
    root = tmp_path_factory.mktemp("dump")
    return synth.write_mini_dump(root / "srwiki-20260401-pages-articles.xml.bz2")


def make_pipeline_config(workdir, **overrides) -> PipelineConfig:
    params = dict(language="sr", project="wikipedia", version="20260401",
                  workdir=workdir, workers=1, seed=42)
    params.update(overrides)
    return PipelineConfig(**params)


def run_pipeline_on_dump(dump_path, workdir, **overrides):
    """Copy the dump into a fresh workdir and run every stage there."""
    config = make_pipeline_config(workdir, **overrides)
    layout = layout_for(config)
    layout.workdir.mkdir(parents=True, exist_ok=True)
    layout.archive.write_bytes(dump_path.read_bytes())
    summary = run(config)
    return config, layout, summary


@pytest.fixture(scope="session")
def mini_run(tmp_path_factory, mini_dump_path) -> tuple[PipelineConfig, Layout, dict]:
    """One complete single-worker run over the 1000-article dump."""
    workdir = tmp_path_factory.mktemp("run") / "work"
    return run_pipeline_on_dump(mini_dump_path, workdir)
