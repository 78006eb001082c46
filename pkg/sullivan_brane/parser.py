"""Model files: parsing, pretty printing, hashing and the bundled corpus.

A model file is line oriented. Section headers start in column 1, entries
are indented, and ``#`` starts a comment::

    name: cp2
    generators:
      x : 2
      y : 5
    differential:
      d y = x^3
    expected:
      euler = 3
      formal_dimension = 4
      cohomology = 1 0 1 0 1

Text starting with ``{`` is read as the JSON form of ``ModelSpec``.
The full grammar is in docs/MODEL_FORMAT.md.
"""

import hashlib
import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError
from sympy import QQ

from sullivan_brane.algebra import GeneratorTable, GradedPolynomial
from sullivan_brane.cdga import CDGA
from sullivan_brane.exceptions import ModelParseError
from sullivan_brane.models import (
    IDENTIFIER,
    ExpectedValues,
    Generator,
    GeneratorDecl,
    ModelSpec,
)

logger = logging.getLogger(__name__)

CORPUS_DIR = Path(__file__).parent / "corpus"
MODEL_SUFFIX = ".model"
SECTIONS = ["name", "generators", "differential", "expected"]

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\S))")
_HEADER = re.compile(r"^(?P<key>[A-Za-z_]+)\s*:(?P<rest>.*)$")
_GENERATOR = re.compile(r"^(?P<name>\S+)\s*:\s*(?P<degree>-?\d+)$")
_DIFFERENTIAL = re.compile(r"^d\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|\((?P<pname>[A-Za-z_][A-Za-z0-9_]*)\))\s*=")
_EXPECTED = re.compile(r"^(?P<key>[A-Za-z_]+)\s*=\s*(?P<value>.*)$")


class _ExpressionParser:
    """Recursive-descent parser for polynomial expressions.

    expr   := ["+" | "-"] term (("+" | "-") term)*
    term   := factor (["*"] factor)*
    factor := atom ["^" integer]
    atom   := integer ["/" integer] | generator | "(" expr ")"
    """

    def __init__(self, text: str, table: GeneratorTable, line: int = 0, offset: int = 0):
        self.text = text
        self.table = table
        self.line = line
        self.offset = offset
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            match = _TOKEN.match(text, pos)
            if match is None or match.end() == pos:
                break
            kind = match.lastgroup
            self.tokens.append((kind, match.group(kind), match.start(kind)))
            pos = match.end()
        self.pos = 0

    def error(self, message: str, column: Optional[int] = None) -> ModelParseError:
        if column is None:
            column = self.tokens[self.pos][2] if self.pos < len(self.tokens) else len(self.text)
        return ModelParseError(message, line=self.line, column=self.offset + column + 1)

    def peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def accept(self, op: str) -> bool:
        token = self.peek()
        if token is not None and token[0] == "op" and token[1] == op:
            self.pos += 1
            return True
        return False

    def expect_number(self) -> int:
        token = self.peek()
        if token is None or token[0] != "number":
            raise self.error("expected an integer")
        self.pos += 1
        return int(token[1])

    def parse(self) -> GradedPolynomial:
        if not self.tokens:
            raise self.error("empty expression")
        result = self.expr()
        if self.pos < len(self.tokens):
            raise self.error(f"unexpected '{self.tokens[self.pos][1]}'")
        return result

    def expr(self) -> GradedPolynomial:
        negative = False
        if self.accept("-"):
            negative = True
        else:
            self.accept("+")
        result = self.term()
        if negative:
            result = -result
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> GradedPolynomial:
        result = self.factor()
        while True:
            if self.accept("*"):
                result = result * self.factor()
                continue
            token = self.peek()
            # juxtaposition
            if token is not None and (token[0] in ("number", "name") or token[1] == "("):
                result = result * self.factor()
                continue
            return result

    def factor(self) -> GradedPolynomial:
        token = self.peek()
        base = self.atom()
        if self.accept("^"):
            column = self.tokens[self.pos - 1][2]
            exponent = self.expect_number()
            if token[0] == "name" and self.table[self.table.index(token[1])].is_odd and exponent > 1:
                raise self.error(f"odd generator '{token[1]}' cannot be raised to the power {exponent}", column)
            return base ** exponent
        return base

    def atom(self) -> GradedPolynomial:
        token = self.peek()
        if token is None:
            raise self.error("unexpected end of expression")
        kind, text, column = token
        if kind == "number":
            self.pos += 1
            denominator = 1
            if self.accept("/"):
                denominator = self.expect_number()
                if denominator == 0:
                    raise self.error("division by zero", column)
            return GradedPolynomial.constant(self.table, QQ(int(text), denominator))
        if kind == "name":
            if text not in self.table:
                raise self.error(f"unknown generator '{text}'", column)
            self.pos += 1
            return GradedPolynomial.generator(self.table, text)
        if self.accept("("):
            inner = self.expr()
            if not self.accept(")"):
                raise self.error("expected ')'")
            return inner
        raise self.error(f"unexpected '{text}'", column)


def parse_expression(
    text: str,
    table: GeneratorTable,
    line: int = 0,
    offset: int = 0,
) -> GradedPolynomial:
    """Parse a polynomial expression over a generator table.

    Args:
        text: Expression such as ``"x^3 - 1/2*x*y"``
        table: Generators the expression may reference
        line: Line number used in error messages
        offset: Column of the expression within its line

    Returns:
        The parsed polynomial

    Raises:
        ModelParseError: On syntax errors, unknown generators or odd powers
    """
    return _ExpressionParser(text, table, line, offset).parse()


def _table_of(decls: List[GeneratorDecl]) -> GeneratorTable:
    return GeneratorTable(Generator(name=g.name, degree=g.degree) for g in decls)


def _compile_differential(
    name: str,
    expr: str,
    table: GeneratorTable,
    line: int = 0,
    offset: int = 0,
) -> GradedPolynomial:
    poly = parse_expression(expr, table, line, offset)
    expected = table.degrees[table.index(name)] + 1
    if not poly.is_zero() and poly.degrees() != [expected]:
        found = ", ".join(str(d) for d in poly.degrees())
        raise ModelParseError(
            f"differential of '{name}' is inhomogeneous or has the wrong degree: "
            f"expected degree {expected}, found {found}",
            line=line,
            column=offset + 1,
        )
    return poly


def _compile(spec: ModelSpec, positions: Optional[Dict[str, Tuple[int, int]]] = None) -> Tuple[GeneratorTable, Dict[str, GradedPolynomial]]:
    table = _table_of(spec.generators)
    positions = positions or {}
    values = {}
    for name, expr in spec.differential.items():
        line, offset = positions.get(name, (0, 0))
        values[name] = _compile_differential(name, expr, table, line, offset)
    return table, values


def _parse_int(text: str, line: int, column: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ModelParseError(f"expected an integer, got '{text}'", line=line, column=column)


def _parse_json(text: str) -> ModelSpec:
    try:
        spec = ModelSpec.model_validate_json(text)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        message = f"{where}: {first['msg']}" if where else first["msg"]
        raise ModelParseError(message, line=1, column=1)
    _compile(spec)
    return spec


def _parse_text(text: str) -> ModelSpec:
    name: Optional[str] = None
    name_line = 0
    generators: List[GeneratorDecl] = []
    declared: Dict[str, int] = {}
    differential: Dict[str, str] = {}
    positions: Dict[str, Tuple[int, int]] = {}
    expected: Dict[str, object] = {}
    seen_sections = set()
    section: Optional[str] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        indent = len(body) - len(body.lstrip())

        if indent == 0:
            header = _HEADER.match(body)
            if header is None or header.group("key") not in SECTIONS:
                raise ModelParseError(
                    f"expected a section header ({', '.join(SECTIONS)}), got '{body.strip()}'",
                    line=lineno,
                    column=1,
                )
            key = header.group("key")
            if key in seen_sections:
                raise ModelParseError(f"duplicate section '{key}'", line=lineno, column=1)
            seen_sections.add(key)
            rest = header.group("rest").strip()
            if key == "name":
                if not rest:
                    raise ModelParseError("model name is empty", line=lineno, column=len(body) + 1)
                name, name_line = rest, lineno
                section = None
            else:
                if rest:
                    raise ModelParseError(
                        f"unexpected text after '{key}:'", line=lineno, column=body.index(rest) + 1
                    )
                section = key
            continue

        entry = body.strip()
        column = indent + 1
        if section is None:
            raise ModelParseError("indented entry outside of a section", line=lineno, column=column)

        if section == "generators":
            match = _GENERATOR.match(entry)
            if match is None:
                raise ModelParseError(
                    f"expected 'name : degree', got '{entry}'", line=lineno, column=column
                )
            gen_name, degree = match.group("name"), int(match.group("degree"))
            if not IDENTIFIER.match(gen_name):
                raise ModelParseError(f"'{gen_name}' is not a generator name", line=lineno, column=column)
            if gen_name in declared:
                raise ModelParseError(
                    f"generator '{gen_name}' already declared on line {declared[gen_name]}",
                    line=lineno,
                    column=column,
                )
            if degree < 2:
                raise ModelParseError(
                    f"generator '{gen_name}' must have degree >= 2, got {degree}",
                    line=lineno,
                    column=indent + entry.rindex(match.group("degree")) + 1,
                )
            declared[gen_name] = lineno
            generators.append(GeneratorDecl(name=gen_name, degree=degree))

        elif section == "differential":
            match = _DIFFERENTIAL.match(entry)
            if match is None:
                raise ModelParseError(
                    f"expected 'd name = expression', got '{entry}'", line=lineno, column=column
                )
            gen_name = match.group("name") or match.group("pname")
            if gen_name in differential:
                raise ModelParseError(f"differential of '{gen_name}' given twice", line=lineno, column=column)
            expr = entry[match.end():]
            stripped = expr.strip()
            if not stripped:
                raise ModelParseError(
                    f"empty differential for '{gen_name}'", line=lineno, column=indent + len(entry) + 1
                )
            differential[gen_name] = stripped
            positions[gen_name] = (lineno, indent + match.end() + (len(expr) - len(expr.lstrip())))

        else:
            match = _EXPECTED.match(entry)
            if match is None:
                raise ModelParseError(f"expected 'key = value', got '{entry}'", line=lineno, column=column)
            key, value = match.group("key"), match.group("value").strip()
            value_column = indent + match.start("value") + 1
            if key in expected:
                raise ModelParseError(f"expected value '{key}' given twice", line=lineno, column=column)
            if key in ("euler", "formal_dimension"):
                expected[key] = _parse_int(value, lineno, value_column)
            elif key == "cohomology":
                expected[key] = [_parse_int(v, lineno, value_column) for v in value.split()]
            else:
                raise ModelParseError(
                    f"unknown expected value '{key}' (euler, formal_dimension, cohomology)",
                    line=lineno,
                    column=column,
                )

    if name is None:
        raise ModelParseError("missing 'name:' section", line=1, column=1)
    if not generators:
        raise ModelParseError("model declares no generators", line=name_line, column=1)
    for gen_name, (lineno, offset) in positions.items():
        if gen_name not in declared:
            raise ModelParseError(
                f"differential given for undeclared generator '{gen_name}'", line=lineno, column=1
            )

    try:
        spec = ModelSpec(
            name=name,
            generators=generators,
            differential=differential,
            expected=ExpectedValues(**expected),
        )
    except ValidationError as e:
        raise ModelParseError(e.errors()[0]["msg"], line=name_line, column=1)

    _compile(spec, positions)
    return spec


def parse_model(text: str) -> ModelSpec:
    """Parse a model file.

    Args:
        text: Model file contents, text format or JSON

    Returns:
        Validated ModelSpec whose differentials are homogeneous of degree +1

    Raises:
        ModelParseError: With line and column of the first problem found
    """
    if text.lstrip().startswith("{"):
        spec = _parse_json(text)
    else:
        spec = _parse_text(text)
    logger.debug("Parsed model '%s' with %d generators", spec.name, len(spec.generators))
    return spec


def build_cdga(spec: ModelSpec) -> CDGA:
    """Turn a parsed spec into a CDGA over its declared generators."""
    table, values = _compile(spec)
    return CDGA(table, values, label=spec.name)


def pretty_print(spec: ModelSpec) -> str:
    """Render a spec in the text format.

    Differentials are listed in generator order, so the output is the same
    for text and JSON inputs of one model.
    """
    lines = [f"name: {spec.name}", "generators:"]
    lines.extend(f"  {g.name} : {g.degree}" for g in spec.generators)
    if spec.differential:
        lines.append("differential:")
        for g in spec.generators:
            if g.name in spec.differential:
                lines.append(f"  d {g.name} = {spec.differential[g.name]}")
    exp = spec.expected
    if exp.euler is not None or exp.formal_dimension is not None or exp.cohomology is not None:
        lines.append("expected:")
        if exp.euler is not None:
            lines.append(f"  euler = {exp.euler}")
        if exp.formal_dimension is not None:
            lines.append(f"  formal_dimension = {exp.formal_dimension}")
        if exp.cohomology is not None:
            lines.append(f"  cohomology = {' '.join(str(n) for n in exp.cohomology)}")
    return "\n".join(lines) + "\n"


def content_hash(spec: ModelSpec) -> str:
    """SHA-256 of the pretty-printed spec."""
    return hashlib.sha256(pretty_print(spec).encode("utf-8")).hexdigest()


def corpus_models() -> List[str]:
    """Names of the bundled models."""
    return sorted(p.stem for p in CORPUS_DIR.glob(f"*{MODEL_SUFFIX}"))


def resolve_model_path(reference: str) -> Path:
    """Find a model file by path or by bundled corpus name.

    Raises:
        FileNotFoundError: If neither a file nor a corpus model matches
    """
    path = Path(reference)
    if path.is_file():
        return path
    stem = reference[: -len(MODEL_SUFFIX)] if reference.endswith(MODEL_SUFFIX) else reference
    bundled = CORPUS_DIR / f"{stem}{MODEL_SUFFIX}"
    if bundled.is_file():
        return bundled
    raise FileNotFoundError(
        f"No model file '{reference}' and no bundled model of that name "
        f"(bundled: {', '.join(corpus_models())})"
    )


def load_model(reference: str) -> ModelSpec:
    """Read and parse a model file or bundled model."""
    path = resolve_model_path(reference)
    return parse_model(path.read_text(encoding="utf-8"))


def load_corpus_model(name: str) -> ModelSpec:
    """Parse a bundled model by name."""
    return parse_model((CORPUS_DIR / f"{name}{MODEL_SUFFIX}").read_text(encoding="utf-8"))
