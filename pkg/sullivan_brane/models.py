"""Pydantic data models and configuration constants for Sullivan Brane."""

import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional
from pydantic import BaseModel, Field, computed_field, field_validator, model_validator

from sullivan_brane import __version__


# Computation defaults
DEFAULT_MAX_DEGREE = 12
DEFAULT_K = 1
ITERATION_CAP = 64
PERTURBATION_TRIALS = 20

# Cache
CACHE_ENV_VAR = "SULLIVAN_BRANE_CACHE_DIR"
DEFAULT_CACHE_DIR = Path("local_data/cache")

# Reports
TOOL_VERSION = __version__
REPORT_SCHEMA_VERSION = "1"
REPORT_FORMATS = ["human", "structured"]
COMMANDS = [
    "validate",
    "cohomology",
    "euler",
    "diagonal-class",
    "jacobian",
    "shriek",
    "vanishing",
    "compare",
]

# Exit codes
EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

GENERATOR_ORIGINS = ["base", "suspended", "disk", "tensor-copy"]
IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class Generator(BaseModel):
    """A graded generator of a free graded-commutative algebra.

    Derived generators remember where they come from: ``shift`` is the
    suspension amount for ``suspended``/``disk`` generators, ``copy`` the
    tensor factor for ``tensor-copy`` generators and ``source`` the name of
    the base generator they were derived from.
    """

    name: str = Field(..., min_length=1)
    degree: int = Field(..., ge=1)
    origin: Literal["base", "suspended", "disk", "tensor-copy"] = "base"
    shift: int = Field(default=0, ge=0)
    copy_index: int = Field(default=0, ge=0)
    source: Optional[str] = None
    primed: bool = False

    @computed_field
    @property
    def parity(self) -> int:
        """Degree mod 2."""
        return self.degree % 2

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1

    @property
    def base_name(self) -> str:
        """Name of the base generator this one is derived from."""
        return self.source or self.name

    @model_validator(mode="after")
    def validate_base_degree(self) -> "Generator":
        """Base generators live in degree at least 2 (V^1 = 0)."""
        if self.origin == "base" and self.degree < 2:
            raise ValueError(
                f"Base generator '{self.name}' must have degree >= 2, got {self.degree}"
            )
        return self

    model_config = {"frozen": True}


class GeneratorDecl(BaseModel):
    """A generator as declared in a model file."""

    name: str
    degree: int = Field(..., ge=2)

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        """Generator names are plain identifiers."""
        if not IDENTIFIER.match(v):
            raise ValueError(f"Generator name '{v}' is not an identifier")
        return v

    model_config = {"frozen": True}


class ExpectedValues(BaseModel):
    """Optional regression metadata carried by a model file."""

    euler: Optional[int] = None
    formal_dimension: Optional[int] = None
    cohomology: Optional[List[int]] = None

    model_config = {"frozen": True}


class ModelSpec(BaseModel):
    """Parsed description of a Sullivan model.

    Differentials are kept as expression strings; ``parser.build_cdga``
    turns them into polynomials and enforces homogeneity.
    """

    name: str = Field(..., min_length=1)
    generators: List[GeneratorDecl] = Field(..., min_length=1)
    differential: Dict[str, str] = Field(default_factory=dict)
    expected: ExpectedValues = Field(default_factory=ExpectedValues)

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        """Model names fit on one line of a model file."""
        v = v.strip()
        if not v or "#" in v or "\n" in v:
            raise ValueError("Model name must be a nonempty single line without '#'")
        return v

    @field_validator("differential")
    @classmethod
    def validate_expressions(cls, v: Dict[str, str]) -> Dict[str, str]:
        """Differential expressions are nonempty single lines."""
        cleaned = {}
        for name, expr in v.items():
            expr = expr.strip()
            if not expr or "#" in expr or "\n" in expr:
                raise ValueError(f"Differential of '{name}' must be a nonempty single line without '#'")
            cleaned[name] = expr
        return cleaned

    @field_validator("generators")
    @classmethod
    def validate_unique_names(cls, v: List[GeneratorDecl]) -> List[GeneratorDecl]:
        """Generator names must be unique."""
        names = [g.name for g in v]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"Duplicate generator names: {', '.join(duplicates)}")
        return v

    @model_validator(mode="after")
    def validate_differential_keys(self) -> "ModelSpec":
        """Differentials may only be given for declared generators."""
        declared = {g.name for g in self.generators}
        unknown = sorted(set(self.differential) - declared)
        if unknown:
            raise ValueError(f"Differential given for undeclared generators: {', '.join(unknown)}")
        return self

    model_config = {"frozen": True}


class Witness(BaseModel):
    """Evidence attached to a failed check."""

    check: str
    subject: str
    residue: str

    model_config = {"frozen": True}


class EllipticReport(BaseModel):
    """Ellipticity and purity data of a Sullivan model."""

    k: int = Field(..., ge=1)
    p: int = Field(..., ge=0)
    q: int = Field(..., ge=0)
    even_degrees: List[int]
    odd_degrees: List[int]
    euler_characteristic: Optional[int] = None
    formal_dimension: int
    loop_dimension: int
    pure: bool
    regular_sequence: bool
    notes: List[str] = Field(default_factory=list)

    @computed_field
    @property
    def euler_nonzero_iff_balanced(self) -> Optional[bool]:
        """Cross-check of the criterion χ ≠ 0 ⟺ p = q."""
        if self.euler_characteristic is None:
            return None
        return (self.euler_characteristic != 0) == (self.p == self.q)

    model_config = {"frozen": True}


class ClassVerdict(BaseModel):
    """Outcome of the vanishing check for one basis class."""

    degree: int
    index: int
    representative: str
    product_vanishes: bool
    scaled_product_vanishes: bool

    model_config = {"frozen": True}


class VanishingReport(BaseModel):
    """Verdicts of χ·ev*ω·α = 0 over a basis of positive-degree classes."""

    model_id: str
    k: int
    euler_characteristic: Optional[int] = None
    formal_dimension: Optional[int] = None
    max_degree: int
    applicable: bool = True
    reason: Optional[str] = None
    verdicts: List[ClassVerdict] = Field(default_factory=list)
    decomposition_holds: bool = True
    coproduct_identities_hold: bool = True
    witnesses: List[Witness] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        """Pass iff every scaled product reduces to zero and the side checks hold."""
        if not self.applicable:
            return False
        return (
            all(v.scaled_product_vanishes for v in self.verdicts)
            and self.decomposition_holds
            and self.coproduct_identities_hold
        )

    model_config = {"frozen": True}


class CommandFlags(BaseModel):
    """Flags that change the outcome of a command and key its cache entry."""

    max_degree: Optional[int] = Field(default=None, ge=0)
    k: int = Field(default=DEFAULT_K, ge=1)

    model_config = {"frozen": True}


class Report(BaseModel):
    """Result of one CLI command, deterministic for fixed input and flags."""

    command: str
    model_id: str
    content_hash: str
    flags: CommandFlags = Field(default_factory=CommandFlags)
    success: bool
    exit_code: int = EXIT_PASS
    results: Dict[str, Any] = Field(default_factory=dict)
    witnesses: List[Witness] = Field(default_factory=list)
    error: Optional[str] = None
    tool_version: str = TOOL_VERSION
    schema_version: str = REPORT_SCHEMA_VERSION

    @field_validator("command")
    @classmethod
    def validate_command(cls, v: str) -> str:
        """Validate command is supported."""
        if v not in COMMANDS:
            raise ValueError(f"Command must be one of: {', '.join(COMMANDS)}")
        return v

    model_config = {"frozen": True}
