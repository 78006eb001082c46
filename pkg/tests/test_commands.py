"""Test command handlers, exit codes and report rendering."""

import json

import pytest

from sullivan_brane.commands import COMMAND_HANDLERS, render_report, run_command
from sullivan_brane.models import COMMANDS, CommandFlags
from sullivan_brane.parser import load_corpus_model, parse_model

NON_ELLIPTIC = "name: non_elliptic\ngenerators:\n  x : 2\n  w : 2\n  y : 3\ndifferential:\n  d y = x^2\n"


def run(command, name, **flags):
    spec = load_corpus_model(name) if "\n" not in name else parse_model(name)
    return run_command(command, spec, CommandFlags(**flags))


def test_every_command_has_a_handler():
    """Test the command table matches the command list."""
    assert list(COMMAND_HANDLERS) == COMMANDS


def test_unknown_command():
    """Test unknown commands raise ValueError."""
    with pytest.raises(ValueError):
        run_command("homotopy", load_corpus_model("s2"))


def test_validate_s2():
    """Test a valid model passes with its expected values."""
    report, code = run("validate", "s2")
    assert code == 0
    assert report.success is True
    assert report.results["d_squared_zero"] is True
    assert report.results["pure"] is True
    assert report.results["cohomology"][:3] == [1, 0, 1]
    assert report.results["elliptic"]["euler_characteristic"] == 2


def test_validate_broken_dsquared():
    """Test d^2 != 0 fails with a witness."""
    report, code = run("validate", "broken_dsquared")
    assert code == 1
    assert report.success is False
    assert report.witnesses[0].check == "d_squared"
    assert report.witnesses[0].subject == "z"
    assert "d^2 != 0" in report.error


def test_validate_reports_expected_mismatch():
    """Test wrong expected values produce witnesses."""
    text = "name: s2\ngenerators:\n  x : 2\n  y : 3\ndifferential:\n  d y = x^2\nexpected:\n  euler = 3\n"
    report, code = run("validate", text)
    assert code == 1
    assert [w.check for w in report.witnesses] == ["expected_euler"]
    assert report.witnesses[0].residue == "2 != 3"


def test_other_commands_check_d_squared_first():
    """Test commands refuse models with d^2 != 0."""
    report, code = run("euler", "broken_dsquared")
    assert code == 1
    assert report.error == "d^2 != 0 on generator z"


def test_cohomology_cp2():
    """Test dimensions and representatives through degree 6."""
    report, code = run("cohomology", "cp2", max_degree=6)
    assert code == 0
    assert report.results["dimensions"] == [1, 0, 1, 0, 1, 0, 0]
    assert report.results["basis"] == {"0": ["1"], "2": ["x"], "4": ["x^2"]}


def test_euler():
    """Test χ, m and the criterion for S^3 x S^3."""
    report, code = run("euler", "s3xs3")
    assert code == 0
    assert report.results["euler_characteristic"] == 0
    assert report.results["formal_dimension"] == 6
    assert report.results["p"] == 0
    assert report.results["q"] == 2
    assert report.results["criterion_holds"] is True


def test_euler_non_elliptic():
    """Test a model with infinite cohomology fails the finiteness check."""
    report, code = run("euler", NON_ELLIPTIC)
    assert code == 1
    assert report.results["euler_characteristic"] is None
    assert report.witnesses[0].check == "finiteness"


def test_diagonal_class():
    """Test μ*(Δ) = 2ω on S^2."""
    report, code = run("diagonal-class", "s2")
    assert code == 0
    assert report.results["pullback"] == "2*omega"
    assert report.results["orientation_class"] == "x"


def test_jacobian_cp2():
    """Test det = 3x^2 = 3ω = χω."""
    report, code = run("jacobian", "cp2")
    assert code == 0
    assert report.results["determinant"] == "3*x^2"
    assert report.results["class"] == "3*omega"
    assert report.results["euler_characteristic"] == 3
    assert report.results["matches_euler"] is True


def test_jacobian_outside_domain():
    """Test p != q is a usage error."""
    report, code = run("jacobian", "s3")
    assert code == 2
    assert report.success is False
    assert report.error


def test_shriek_s2():
    """Test the shriek certificate on S^2."""
    report, code = run("shriek", "s2")
    assert code == 0
    results = report.results
    assert results["lambda"] == "2"
    assert results["lambda_equals_euler"] is True
    assert results["transported_lambda"] == "2"
    assert results["top_matches"] is True
    assert results["mu_phi_one"] == "2*x"
    assert report.witnesses == []


def test_vanishing():
    """Test the vanishing check passes on S^2."""
    report, code = run("vanishing", "s2", max_degree=8)
    assert code == 0
    assert report.results["passed"] is True
    assert report.results["applicable"] is True


def test_vanishing_not_applicable():
    """Test even k is reported as not applicable with exit code 2."""
    report, code = run("vanishing", "hp2", k=2)
    assert code == 2
    assert report.results["applicable"] is False
    assert "not applicable" in report.error


def test_compare():
    """Test the shriek side agrees with the coproduct formula on S^2."""
    report, code = run("compare", "s2")
    assert code == 0
    assert report.results["lambda"] == "2"
    assert report.results["representative_independent"] is True
    assert report.results["coproduct_entries"] > 0


def test_report_identity_fields():
    """Test reports carry the model hash, flags and versions."""
    report, _ = run("euler", "s2", max_degree=6, k=3)
    assert len(report.content_hash) == 64
    assert report.flags.k == 3
    assert report.flags.max_degree == 6
    assert report.schema_version == "1"


def test_render_human():
    """Test the human format lists status, results and tool line."""
    report, _ = run("diagonal-class", "s2")
    text = render_report(report, "human")
    lines = text.splitlines()
    assert lines[0] == "command: diagonal-class"
    assert lines[1].startswith("model: s2 (")
    assert "status: PASS (exit 0)" in lines
    assert "  pullback: 2*omega" in lines
    assert lines[-1].startswith("tool: sullivan-brane ")
    assert text.endswith("\n")


def test_render_witnesses():
    """Test witnesses are listed with check, subject and residue."""
    report, _ = run("validate", "broken_dsquared")
    text = render_report(report)
    assert "status: FAIL (exit 1)" in text
    assert "  d_squared on z: x^3" in text


def test_render_structured():
    """Test the structured format is the report as JSON."""
    report, _ = run("euler", "cp2")
    data = json.loads(render_report(report, "structured"))
    assert data["command"] == "euler"
    assert data["exit_code"] == 0
    assert data["results"]["euler_characteristic"] == 3


def test_render_unknown_format():
    """Test unknown formats raise ValueError."""
    report, _ = run("euler", "s2")
    with pytest.raises(ValueError):
        render_report(report, "xml")
