"""Integration tests for complete workflows."""

import json

import pytest

from sullivan_brane.cli import main
from sullivan_brane.commands import run_command
from sullivan_brane.models import CommandFlags
from sullivan_brane.homology import elliptic_report
from sullivan_brane.mapping import build_disk_model, build_sphere_model, prepare_base
from sullivan_brane.parser import build_cdga, load_model, parse_model
from sullivan_brane.shriek import build_phi

PROJECTIVE_PLANE = """\
# Complex projective plane, written by hand
name: my_cp2
generators:
  x : 2
  y : 5
differential:
  d(y) = x x x
expected:
  euler = 3
  formal_dimension = 4
"""


@pytest.mark.parametrize("name", ["s2", "cp2", "s2xs2", "hp2"])
def test_lambda_equals_euler_from_file(name):
    """Test file -> model -> φ -> λ agrees with χ from cohomology."""
    A = build_cdga(load_model(name))
    cert = build_phi(build_disk_model(build_sphere_model(prepare_base(A), 1)))
    assert cert.lambda_value == elliptic_report(A).euler_characteristic


def test_hand_written_model_through_every_command(tmp_path, capsys):
    """Test a user model file runs through the CLI pipeline."""
    path = tmp_path / "my_cp2.model"
    path.write_text(PROJECTIVE_PLANE)
    cache = tmp_path / "cache"
    for command in ("validate", "euler", "diagonal-class", "jacobian", "shriek"):
        assert main([command, str(path), "--cache-dir", str(cache), "--format", "structured"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["model_id"] == "my_cp2"
        assert data["success"] is True
    assert len(list(cache.glob("*.json"))) == 5


def test_vanishing_pipeline_from_file(tmp_path, capsys):
    """Test the vanishing report end to end for S^4 with k = 3."""
    assert main(["vanishing", "s4", "--k", "3", "--max-degree", "10", "--format", "structured", "--no-cache"]) == 0
    data = json.loads(capsys.readouterr().out)
    results = data["results"]
    assert results["applicable"] is True
    assert results["euler_characteristic"] == 2
    assert results["passed"] is True
    assert all(v["scaled_product_vanishes"] for v in results["verdicts"])


def test_same_model_same_report():
    """Test text and JSON forms of a model produce the same report."""
    spec = load_model("cp2")
    first, _ = run_command("jacobian", spec, CommandFlags())
    second, _ = run_command("jacobian", parse_model(spec.model_dump_json()), CommandFlags())
    assert first == second


@pytest.mark.slow
def test_product_of_spheres_end_to_end(capsys):
    """Test compare and vanishing on S^2 x S^2."""
    assert main(["compare", "s2xs2", "--no-cache"]) == 0
    assert main(["vanishing", "s2xs2", "--no-cache"]) == 0
