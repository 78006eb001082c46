"""Shared fixtures: bundled models and temporary caches."""

import pytest

from sullivan_brane.cache import ReportCache
from sullivan_brane.parser import build_cdga, load_corpus_model, parse_model


@pytest.fixture
def corpus():
    """Load a bundled model as a CDGA by name."""

    def load(name):
        return build_cdga(load_corpus_model(name))

    return load


@pytest.fixture
def make_model():
    """Build a CDGA from model-file text."""

    def build(text):
        return build_cdga(parse_model(text))

    return build


@pytest.fixture
def s2(corpus):
    return corpus("s2")


@pytest.fixture
def cp2(corpus):
    return corpus("cp2")


@pytest.fixture
def s3(corpus):
    return corpus("s3")


@pytest.fixture
def cache(tmp_path):
    """Empty report cache in a temporary directory."""
    return ReportCache(tmp_path / "cache")
