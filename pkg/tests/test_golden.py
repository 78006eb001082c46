"""Test command reports against the pinned golden results in tests/golden."""

import json
from pathlib import Path

import pytest

from sullivan_brane.commands import run_command
from sullivan_brane.models import CommandFlags
from sullivan_brane.parser import content_hash, load_corpus_model

GOLDEN_DIR = Path(__file__).parent / "golden"
GOLDEN_FILES = sorted(GOLDEN_DIR.glob("*.json"))
VALID_MODELS = ["s2", "s3", "cp2", "hp2", "s4", "s2xs2", "s3xs3"]


def assert_matches(expected, actual, path="results"):
    """Every key pinned in the golden appears with the same value in the report."""
    if isinstance(expected, dict):
        assert isinstance(actual, dict), path
        for key, value in expected.items():
            assert key in actual, f"{path}.{key} missing"
            assert_matches(value, actual[key], f"{path}.{key}")
    else:
        assert actual == expected, f"{path}: {actual!r} != {expected!r}"


def test_goldens_cover_every_valid_model():
    """Test each valid bundled model has goldens for the basic commands."""
    names = {path.stem for path in GOLDEN_FILES}
    for model in VALID_MODELS:
        for command in ("validate", "cohomology", "euler", "diagonal-class", "jacobian", "shriek"):
            assert f"{model}_{command}" in names


@pytest.mark.parametrize("path", GOLDEN_FILES, ids=lambda p: p.stem)
def test_report_matches_golden(path, cache):
    """Test the report of a command on a bundled model against its golden."""
    golden = json.loads(path.read_text(encoding="utf-8"))
    spec = load_corpus_model(golden["model"])
    flags = CommandFlags(**golden["flags"])

    report, code = run_command(golden["command"], spec, flags, cache=cache)

    assert f"{golden['model']}_{golden['command']}" == path.stem
    assert code == golden["exit_code"]
    assert report.exit_code == code
    assert report.success is (code == 0)
    assert report.model_id == golden["model"]
    assert report.content_hash == content_hash(spec)
    assert_matches(golden["results"], report.results)
    if code == 0:
        assert report.witnesses == []
        assert report.error is None

    again, _ = run_command(golden["command"], spec, flags, cache=cache)
    assert again.model_dump_json() == report.model_dump_json()


@pytest.mark.parametrize("name", VALID_MODELS)
@pytest.mark.parametrize("command", ["cohomology", "euler", "diagonal-class"])
def test_fresh_reports_are_byte_identical(name, command):
    """Test two uncached runs serialize to the same bytes."""
    spec = load_corpus_model(name)
    first, _ = run_command(command, spec)
    second, _ = run_command(command, spec)
    assert first.model_dump_json() == second.model_dump_json()
