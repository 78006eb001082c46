"""Test model-file parsing, printing, hashing and corpus lookup."""

import pytest
from sympy import QQ

from sullivan_brane.algebra import GeneratorTable
from sullivan_brane.exceptions import ModelParseError
from sullivan_brane.models import Generator
from sullivan_brane.parser import (
    build_cdga,
    content_hash,
    corpus_models,
    load_corpus_model,
    load_model,
    parse_expression,
    parse_model,
    pretty_print,
    resolve_model_path,
)

VALID = ["cp2", "hp2", "s2", "s2xs2", "s3", "s3xs3", "s4", "broken_dsquared"]


def model_text(differential, generators="  x : 2\n  y : 3\n"):
    """S^2-shaped model whose differential line is line 6."""
    return f"name: t\ngenerators:\n{generators}differential:\n  {differential}\n"


@pytest.fixture
def table():
    return GeneratorTable([Generator(name="x", degree=2), Generator(name="y", degree=3)])


def test_parse_cp2():
    """Test the bundled CP^2 model."""
    spec = load_corpus_model("cp2")
    assert spec.name == "cp2"
    assert [(g.name, g.degree) for g in spec.generators] == [("x", 2), ("y", 5)]
    assert spec.differential == {"y": "x^3"}
    assert spec.expected.euler == 3
    assert spec.expected.formal_dimension == 4
    assert spec.expected.cohomology[:5] == [1, 0, 1, 0, 1]


def test_inhomogeneous_differential_position():
    """Test the error points at the start of the expression."""
    with pytest.raises(ModelParseError) as exc_info:
        load_corpus_model("broken_inhomogeneous")
    assert exc_info.value.line == 7
    assert exc_info.value.column == 9
    assert "inhomogeneous" in exc_info.value.reason
    assert str(exc_info.value).startswith("line 7, column 9:")


def test_unknown_generator():
    """Test unknown names are reported with their column."""
    with pytest.raises(ModelParseError) as exc_info:
        parse_model(model_text("d y = w^2"))
    assert exc_info.value.line == 6
    assert exc_info.value.column == 9
    assert "unknown generator 'w'" in exc_info.value.reason


def test_odd_power_rejected():
    """Test y^2 is rejected for odd y."""
    with pytest.raises(ModelParseError) as exc_info:
        parse_model(model_text("d z = y^2", generators="  x : 2\n  y : 3\n  z : 6\n"))
    assert "odd generator 'y'" in exc_info.value.reason


def test_missing_exponent():
    """Test a dangling ^ asks for an integer."""
    with pytest.raises(ModelParseError) as exc_info:
        parse_model(model_text("d y = x^"))
    assert "expected an integer" in exc_info.value.reason


def test_rationals_and_juxtaposition(table):
    """Test 1/2*x^2, 2x^2 and parenthesised sums."""
    x = parse_expression("x", table)
    assert parse_expression("1/2*x^2", table) == (x * x).scale(QQ(1, 2))
    assert parse_expression("2x^2", table) == (x * x).scale(2)
    assert parse_expression("(x + x)^2", table) == (x * x).scale(4)
    assert parse_expression("-x*y + y x", table).is_zero()


def test_constants_are_field_elements(table):
    """Test rational constants parse straight into QQ."""
    coefficient = parse_expression("6/8", table).terms[table.unit()]
    assert isinstance(coefficient, type(QQ.one))
    assert coefficient == QQ(3, 4)


def test_expression_errors(table):
    """Test empty input, stray tokens and division by zero."""
    for text in ("", "x +", "x )", "1/0", "(x"):
        with pytest.raises(ModelParseError):
            parse_expression(text, table)


def test_expression_column_uses_offset(table):
    """Test columns are reported relative to the full line."""
    with pytest.raises(ModelParseError) as exc_info:
        parse_expression("x + q", table, line=4, offset=10)
    assert exc_info.value.line == 4
    assert exc_info.value.column == 15


def test_parenthesised_differential_name():
    """Test d(y) = ... is accepted."""
    spec = parse_model(model_text("d(y) = x^2"))
    assert spec.differential == {"y": "x^2"}


@pytest.mark.parametrize("name", VALID)
def test_pretty_print_round_trip(name):
    """Test parse(pretty_print(spec)) == spec."""
    spec = load_corpus_model(name)
    text = pretty_print(spec)
    assert text.endswith("\n")
    assert parse_model(text) == spec
    assert pretty_print(parse_model(text)) == text


@pytest.mark.parametrize("name", VALID)
def test_json_form_matches_text(name):
    """Test the JSON form parses to the same spec and hash."""
    spec = load_corpus_model(name)
    from_json = parse_model(spec.model_dump_json())
    assert from_json == spec
    assert content_hash(from_json) == content_hash(spec)


def test_hash_ignores_comments_and_spacing():
    """Test formatting does not change the content hash."""
    plain = parse_model(model_text("d y = x^2"))
    noisy = parse_model("# header\nname: t   # trailing\ngenerators:\n    x:2\n    y   :   3\n\ndifferential:\n  d y =   x^2  \n")
    assert content_hash(noisy) == content_hash(plain)
    assert len(content_hash(plain)) == 64


def test_hash_changes_with_content():
    """Test different differentials give different hashes."""
    assert content_hash(parse_model(model_text("d y = x^2"))) != content_hash(
        parse_model(model_text("d y = 2*x^2"))
    )


def test_invalid_json():
    """Test JSON errors are reported at line 1."""
    for text in ('{"name": "t"}', '{"name": ', '{"name": "t", "generators": [{"name": "x", "degree": 1}]}'):
        with pytest.raises(ModelParseError) as exc_info:
            parse_model(text)
        assert exc_info.value.line == 1


def test_json_differential_is_compiled():
    """Test JSON models get the same homogeneity check."""
    text = '{"name": "t", "generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 3}], "differential": {"y": "x"}}'
    with pytest.raises(ModelParseError) as exc_info:
        parse_model(text)
    assert "wrong degree" in exc_info.value.reason


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("generators:\n  x : 2\n", 1, "missing 'name:'"),
        ("name: t\ngenerators:\n  x : 1\n", 3, "degree >= 2"),
        ("name: t\ngenerators:\n  x : 2\n  x : 4\n", 4, "already declared on line 3"),
        ("name: t\ngenerators:\n  x : 2\ngenerators:\n", 4, "duplicate section"),
        ("name: t\n  x : 2\n", 2, "outside of a section"),
        ("name: t\ngenerators:\n  x = 2\n", 3, "name : degree"),
        ("name: t\nbogus:\n", 2, "section header"),
        ("name: t\n", 1, "no generators"),
        ("name: t\ngenerators:\n  x : 2\ndifferential:\n  d z = x\n", 5, "undeclared generator 'z'"),
        ("name: t\ngenerators:\n  x : 2\n  y : 3\ndifferential:\n  d y = x^2\n  d y = x^2\n", 7, "given twice"),
        ("name: t\ngenerators:\n  x : 2\n  y : 3\ndifferential:\n  d y =\n", 6, "empty differential"),
        ("name: t\ngenerators:\n  x : 2\nexpected:\n  genus = 1\n", 5, "unknown expected value"),
        ("name: t\ngenerators:\n  x : 2\nexpected:\n  euler = many\n", 5, "expected an integer"),
    ],
)
def test_parse_errors(text, line, fragment):
    """Test each error carries its line and a readable reason."""
    with pytest.raises(ModelParseError) as exc_info:
        parse_model(text)
    assert exc_info.value.line == line
    assert fragment in exc_info.value.reason


def test_degree_error_column():
    """Test the degree error points at the degree."""
    with pytest.raises(ModelParseError) as exc_info:
        parse_model("name: t\ngenerators:\n  x : 1\n")
    assert exc_info.value.column == 7


def test_build_cdga(cp2):
    """Test the compiled differential and label."""
    A = build_cdga(load_corpus_model("cp2"))
    assert A.label == "cp2"
    assert A.differential("y") == A.generator("x") ** 3
    assert A.table == cp2.table


def test_corpus_models():
    """Test the bundled corpus listing."""
    names = corpus_models()
    assert len(names) == 9
    assert names == sorted(names)
    assert {"s2", "cp2", "broken_dsquared", "broken_inhomogeneous"} <= set(names)


def test_resolve_model_path(tmp_path):
    """Test lookup by file path and by corpus name."""
    assert resolve_model_path("s2").name == "s2.model"
    assert resolve_model_path("s2.model").name == "s2.model"
    path = tmp_path / "mine.model"
    path.write_text(model_text("d y = x^2"))
    assert resolve_model_path(str(path)) == path
    assert load_model(str(path)).name == "t"
    with pytest.raises(FileNotFoundError) as exc_info:
        resolve_model_path("nonexistent")
    assert "bundled:" in str(exc_info.value)
