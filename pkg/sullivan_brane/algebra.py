"""Free graded-commutative algebras over the rationals.

Monomials are exponent tuples over a frozen, ordered ``GeneratorTable``.
Odd generators carry exponent 0 or 1, and a monomial stands for the
product of its generators in table order. Koszul signs are produced only
when two monomials are multiplied.
"""

import logging
from functools import lru_cache
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import QQ, Poly, Rational as SympyRational, symbols

from sullivan_brane.exceptions import StructuralError
from sullivan_brane.models import Generator

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Rational = type(QQ.one)
Scalar = Union[int, Rational, SympyRational]


def to_rational(value: Any) -> Rational:
    """Coerce an integer or sympy number into an element of QQ."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        return QQ(int(value))
    if isinstance(value, int):
        return QQ(value)
    return QQ.from_sympy(value)


class GeneratorTable:
    """An ordered, immutable list of graded generators."""

    __slots__ = ("generators", "names", "degrees", "odd", "_index", "_hash")

    def __init__(self, generators: Iterable[Generator]):
        self.generators: Tuple[Generator, ...] = tuple(generators)
        self.names: Tuple[str, ...] = tuple(g.name for g in self.generators)
        if len(set(self.names)) != len(self.names):
            raise StructuralError(f"Generator names are not unique: {', '.join(self.names)}")
        self.degrees: Tuple[int, ...] = tuple(g.degree for g in self.generators)
        self.odd: Tuple[bool, ...] = tuple(g.is_odd for g in self.generators)
        self._index = {name: i for i, name in enumerate(self.names)}
        self._hash = hash((self.names, self.degrees))

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.generators)

    def __getitem__(self, i: int) -> Generator:
        return self.generators[i]

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, GeneratorTable):
            return NotImplemented
        return self._hash == other._hash and self.generators == other.generators

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"GeneratorTable({body})"

    def index(self, generator: Union[str, int]) -> int:
        """Position of a generator given by name or index."""
        if isinstance(generator, int):
            if not 0 <= generator < len(self.generators):
                raise StructuralError(f"Generator index {generator} out of range")
            return generator
        try:
            return self._index[generator]
        except KeyError:
            raise StructuralError(f"Unknown generator '{generator}'") from None

    def unit(self) -> Monomial:
        return (0,) * len(self.generators)

    def generator_monomial(self, generator: Union[str, int]) -> Monomial:
        i = self.index(generator)
        mono = [0] * len(self.generators)
        mono[i] = 1
        return tuple(mono)

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def monomial_length(self, mono: Monomial) -> int:
        """Word length of a monomial."""
        return sum(mono)

    def is_prefix_of(self, other: "GeneratorTable") -> bool:
        n = len(self.generators)
        return other.generators[:n] == self.generators

    def extend(self, generators: Iterable[Generator]) -> "GeneratorTable":
        return GeneratorTable(self.generators + tuple(generators))

    def format_monomial(self, mono: Monomial) -> str:
        factors = []
        for name, e in zip(self.names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        return "*".join(factors) if factors else "1"


def multiply_monomials(a: Monomial, b: Monomial, table: GeneratorTable) -> Tuple[int, Monomial]:
    """Multiply two monomials, returning the Koszul sign and the product.

    The sign is 0 when an odd generator would appear twice. Each odd
    generator of ``b`` is moved left past the odd generators of ``a`` with
    a larger index.
    """
    sign = 1
    odd_after = 0
    odd = table.odd
    for i in range(len(a) - 1, -1, -1):
        if odd[i]:
            if b[i]:
                if a[i]:
                    return 0, a
                if odd_after % 2:
                    sign = -sign
            if a[i]:
                odd_after += 1
    return sign, tuple(x + y for x, y in zip(a, b))


class GradedPolynomial:
    """Exact rational linear combination of monomials over a generator table."""

    __slots__ = ("table", "terms")

    def __init__(self, table: GeneratorTable, terms: Optional[Mapping[Monomial, Any]] = None):
        self.table = table
        clean: Dict[Monomial, Rational] = {}
        for mono, coeff in (terms or {}).items():
            if len(mono) != len(table):
                raise StructuralError(
                    f"Monomial {mono} does not match a table with {len(table)} generators"
                )
            c = to_rational(coeff)
            if c:
                clean[mono] = c
        self.terms = clean

    @classmethod
    def _from_clean(cls, table: GeneratorTable, terms: Dict[Monomial, Rational]) -> "GradedPolynomial":
        poly = cls.__new__(cls)
        poly.table = table
        poly.terms = {m: c for m, c in terms.items() if c}
        return poly

    @classmethod
    def zero(cls, table: GeneratorTable) -> "GradedPolynomial":
        return cls._from_clean(table, {})

    @classmethod
    def constant(cls, table: GeneratorTable, value: Scalar) -> "GradedPolynomial":
        return cls._from_clean(table, {table.unit(): to_rational(value)})

    @classmethod
    def one(cls, table: GeneratorTable) -> "GradedPolynomial":
        return cls.constant(table, 1)

    @classmethod
    def monomial(cls, table: GeneratorTable, mono: Monomial, coeff: Scalar = 1) -> "GradedPolynomial":
        return cls(table, {mono: coeff})

    @classmethod
    def generator(cls, table: GeneratorTable, generator: Union[str, int]) -> "GradedPolynomial":
        return cls._from_clean(table, {table.generator_monomial(generator): QQ.one})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degrees(self) -> List[int]:
        return sorted({self.table.monomial_degree(m) for m in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> Optional[int]:
        """Common degree of all terms, None for the zero polynomial."""
        degrees = self.degrees()
        if not degrees:
            return None
        if len(degrees) > 1:
            raise StructuralError(f"Polynomial {self} is not homogeneous (degrees {degrees})")
        return degrees[0]

    def coefficient(self, mono: Monomial) -> Rational:
        return self.terms.get(mono, QQ.zero)

    def used_generators(self) -> List[int]:
        used = set()
        for mono in self.terms:
            used.update(i for i, e in enumerate(mono) if e)
        return sorted(used)

    def sorted_terms(self) -> List[Tuple[Monomial, Rational]]:
        """Terms in monomial order: higher degree first, then descending exponents."""
        return sorted(
            self.terms.items(),
            key=lambda item: (self.table.monomial_degree(item[0]), item[0]),
            reverse=True,
        )

    def leading_term(self) -> Tuple[Monomial, Rational]:
        if not self.terms:
            raise StructuralError("The zero polynomial has no leading term")
        return self.sorted_terms()[0]

    def _check_table(self, other: "GradedPolynomial") -> None:
        if self.table is not other.table and self.table != other.table:
            raise StructuralError("Operands live over different generator tables")

    def __add__(self, other: Any) -> "GradedPolynomial":
        if not isinstance(other, GradedPolynomial):
            other = GradedPolynomial.constant(self.table, other)
        self._check_table(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, QQ.zero) + c
        return GradedPolynomial._from_clean(self.table, terms)

    __radd__ = __add__

    def __neg__(self) -> "GradedPolynomial":
        return GradedPolynomial._from_clean(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Any) -> "GradedPolynomial":
        if not isinstance(other, GradedPolynomial):
            other = GradedPolynomial.constant(self.table, other)
        return self + (-other)

    def __rsub__(self, other: Any) -> "GradedPolynomial":
        return (-self) + other

    def scale(self, value: Scalar) -> "GradedPolynomial":
        c = to_rational(value)
        if not c:
            return GradedPolynomial.zero(self.table)
        return GradedPolynomial._from_clean(self.table, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: Any) -> "GradedPolynomial":
        if isinstance(other, GradedPolynomial):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other: Any) -> "GradedPolynomial":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "GradedPolynomial":
        if exponent < 0:
            raise StructuralError("Negative powers are not defined")
        result = GradedPolynomial.one(self.table)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GradedPolynomial):
            return (self.table is other.table or self.table == other.table) and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self.terms == GradedPolynomial.constant(self.table, other).terms
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def extended(self, table: GeneratorTable) -> "GradedPolynomial":
        """The same element viewed in a table that extends this one."""
        if table is self.table:
            return self
        if not self.table.is_prefix_of(table):
            raise StructuralError("Target table does not extend the polynomial's table")
        pad = (0,) * (len(table) - len(self.table))
        return GradedPolynomial._from_clean(table, {m + pad: c for m, c in self.terms.items()})

    def restricted(self, table: GeneratorTable) -> "GradedPolynomial":
        """The same element viewed in a prefix of this polynomial's table."""
        if table is self.table:
            return self
        if not table.is_prefix_of(self.table):
            raise StructuralError("Target table is not a prefix of the polynomial's table")
        n = len(table)
        terms = {}
        for mono, c in self.terms.items():
            if any(mono[n:]):
                raise StructuralError(f"Term {self.table.format_monomial(mono)} does not lie in the prefix")
            terms[mono[:n]] = c
        return GradedPolynomial._from_clean(table, terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for mono, c in self.sorted_terms():
            body = self.table.format_monomial(mono)
            magnitude = -c if c < 0 else c
            if body == "1":
                text = str(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{magnitude}*{body}"
            if not pieces:
                pieces.append(f"-{text}" if c < 0 else text)
            else:
                pieces.append(f"- {text}" if c < 0 else f"+ {text}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"GradedPolynomial({self})"


def multiply(a: GradedPolynomial, b: GradedPolynomial, ctx: Optional[GeneratorTable] = None) -> GradedPolynomial:
    """Graded-commutative product of two polynomials over the same table."""
    table = ctx or a.table
    for operand in (a, b):
        if operand.table is not table and operand.table != table:
            raise StructuralError("Operands live over different generator tables")
    terms: Dict[Monomial, Rational] = {}
    zero = QQ.zero
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sign, mono = multiply_monomials(ma, mb, table)
            if sign:
                value = ca * cb
                terms[mono] = terms.get(mono, zero) + (value if sign > 0 else -value)
    return GradedPolynomial._from_clean(table, terms)


def substitute(
    poly: GradedPolynomial,
    target: GeneratorTable,
    images: Sequence[GradedPolynomial],
    cache: Optional[Dict[Monomial, GradedPolynomial]] = None,
) -> GradedPolynomial:
    """Apply the algebra map sending generator ``i`` of ``poly.table`` to ``images[i]``."""
    if len(images) != len(poly.table):
        raise StructuralError("One image per source generator is required")
    result: Dict[Monomial, Rational] = {}
    zero = QQ.zero
    for mono, c in poly.terms.items():
        value = cache.get(mono) if cache is not None else None
        if value is None:
            value = GradedPolynomial.one(target)
            for i, e in enumerate(mono):
                for _ in range(e):
                    value = value * images[i]
                if value.is_zero():
                    break
            if cache is not None:
                cache[mono] = value
        for m, v in value.terms.items():
            result[m] = result.get(m, zero) + c * v
    return GradedPolynomial._from_clean(target, result)


@lru_cache(maxsize=8192)
def basis_of_degree(n: int, table: GeneratorTable) -> Tuple[Monomial, ...]:
    """All monomials of total degree ``n``, in descending lexicographic order."""
    if n < 0:
        return ()
    count = len(table)
    degrees = table.degrees
    odd = table.odd
    results: List[Monomial] = []
    prefix: List[int] = []

    def extend(i: int, remaining: int) -> None:
        if i == count:
            if remaining == 0:
                results.append(tuple(prefix))
            return
        top = remaining // degrees[i]
        if odd[i]:
            top = min(top, 1)
        for e in range(top, -1, -1):
            prefix.append(e)
            extend(i + 1, remaining - e * degrees[i])
            prefix.pop()

    extend(0, n)
    return tuple(results)


def hilbert_series(table: GeneratorTable, max_degree: int) -> List[int]:
    """Dimensions of the algebra in degrees 0..max_degree.

    Expands Π_even 1/(1 - t^a) · Π_odd (1 + t^b) as a truncated power
    series in t.
    """
    t = symbols("t")
    series = Poly(1, t, domain=QQ)

    def truncate(p: Poly) -> Poly:
        kept = {exp: c for exp, c in p.as_dict().items() if exp[0] <= max_degree}
        return Poly.from_dict(kept, t, domain=QQ)

    for gen in table:
        if gen.is_odd:
            factor = Poly(1 + t**gen.degree, t, domain=QQ)
        else:
            factor = Poly(sum(t ** (gen.degree * j) for j in range(max_degree // gen.degree + 1)), t, domain=QQ)
        series = truncate(series * factor)

    coefficients = series.as_dict()
    return [int(coefficients.get((n,), 0)) for n in range(max_degree + 1)]
