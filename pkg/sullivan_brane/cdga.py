"""Derivations, commutative differential graded algebras and their morphisms."""

import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import QQ

from sullivan_brane.algebra import (
    GeneratorTable,
    GradedPolynomial,
    Monomial,
    basis_of_degree,
    substitute,
)
from sullivan_brane.exceptions import (
    ConsistencyError,
    DomainError,
    ModelConstructionError,
    StructuralError,
)
from sullivan_brane.models import Generator, Witness

logger = logging.getLogger(__name__)

GeneratorKey = Union[str, int]


class Derivation:
    """A graded derivation determined by its values on generators.

    Applied with the Koszul rule θ(ab) = θ(a)b + (-1)^{|θ||a|} a θ(b).
    Generators without a value are sent to zero.
    """

    def __init__(
        self,
        table: GeneratorTable,
        degree: int,
        values: Mapping[GeneratorKey, GradedPolynomial],
        validate: bool = True,
    ):
        self.table = table
        self.degree = degree
        self._values: List[GradedPolynomial] = [GradedPolynomial.zero(table)] * len(table)
        for key, value in values.items():
            i = table.index(key)
            if value.table != table:
                raise StructuralError(f"Value of '{table.names[i]}' lives over a different table")
            if validate and not value.is_zero():
                expected = table.degrees[i] + degree
                if value.degrees() != [expected]:
                    raise StructuralError(
                        f"Value of '{table.names[i]}' must be homogeneous of degree {expected}, got {value}"
                    )
            self._values[i] = value
        self._cache: Dict[Monomial, GradedPolynomial] = {}

    def value(self, generator: GeneratorKey) -> GradedPolynomial:
        return self._values[self.table.index(generator)]

    def values(self) -> Dict[str, GradedPolynomial]:
        return {name: v for name, v in zip(self.table.names, self._values)}

    def apply_monomial(self, mono: Monomial) -> GradedPolynomial:
        cached = self._cache.get(mono)
        if cached is not None:
            return cached
        table = self.table
        first = next((i for i, e in enumerate(mono) if e), None)
        if first is None:
            result = GradedPolynomial.zero(table)
        else:
            e = mono[first]
            head = [0] * len(mono)
            head[first] = e
            rest = list(mono)
            rest[first] = 0
            lower = list(head)
            lower[first] = e - 1
            head_t, rest_t, lower_t = tuple(head), tuple(rest), tuple(lower)

            rest_poly = GradedPolynomial.monomial(table, rest_t)
            # θ(g^e) = e g^{e-1} θ(g); for odd g only e = 1 occurs
            head_image = (GradedPolynomial.monomial(table, lower_t) * self._values[first]).scale(e)
            result = head_image * rest_poly
            if any(rest_t):
                sign = -1 if (self.degree * table.monomial_degree(head_t)) % 2 else 1
                tail = GradedPolynomial.monomial(table, head_t) * self.apply_monomial(rest_t)
                result = result + tail.scale(sign)
        self._cache[mono] = result
        return result

    def apply(self, poly: GradedPolynomial) -> GradedPolynomial:
        if poly.table != self.table:
            raise StructuralError("Polynomial lives over a different table than the derivation")
        result: Dict[Monomial, object] = {}
        zero = QQ.zero
        for mono, c in poly.terms.items():
            for m, v in self.apply_monomial(mono).terms.items():
                result[m] = result.get(m, zero) + c * v
        return GradedPolynomial(self.table, result)

    __call__ = apply


class CDGA:
    """A free graded-commutative algebra with a differential given on generators."""

    def __init__(
        self,
        table: GeneratorTable,
        differential: Mapping[GeneratorKey, GradedPolynomial],
        label: str = "",
        validate: bool = True,
    ):
        self.table = table
        self.label = label
        self.derivation = Derivation(table, 1, differential, validate=validate)

    def __repr__(self) -> str:
        return f"CDGA({self.label or 'unnamed'}; {', '.join(f'{n}:{d}' for n, d in zip(self.table.names, self.table.degrees))})"

    @property
    def generators(self) -> Tuple[Generator, ...]:
        return self.table.generators

    def differential(self, generator: GeneratorKey) -> GradedPolynomial:
        return self.derivation.value(generator)

    def d(self, poly: GradedPolynomial) -> GradedPolynomial:
        return self.derivation.apply(poly)

    def generator(self, name: GeneratorKey) -> GradedPolynomial:
        return GradedPolynomial.generator(self.table, name)

    def one(self) -> GradedPolynomial:
        return GradedPolynomial.one(self.table)

    def zero(self) -> GradedPolynomial:
        return GradedPolynomial.zero(self.table)

    @property
    def even_indices(self) -> List[int]:
        return [i for i, odd in enumerate(self.table.odd) if not odd]

    @property
    def odd_indices(self) -> List[int]:
        return [i for i, odd in enumerate(self.table.odd) if odd]

    @property
    def even_generators(self) -> List[str]:
        return [self.table.names[i] for i in self.even_indices]

    @property
    def odd_generators(self) -> List[str]:
        return [self.table.names[i] for i in self.odd_indices]

    def is_pure(self) -> bool:
        """d(V^even) = 0 and d(V^odd) lies in the even subalgebra."""
        odd = set(self.odd_indices)
        for i in self.even_indices:
            if not self.differential(i).is_zero():
                return False
        for i in self.odd_indices:
            if any(j in odd for j in self.differential(i).used_generators()):
                return False
        return True

    def filtration_violation(self) -> Optional[str]:
        """Name the first generator whose differential uses itself or a later generator."""
        for i, name in enumerate(self.table.names):
            used = self.differential(i).used_generators()
            if used and max(used) >= i:
                return f"d({name}) = {self.differential(i)} uses generators at or after '{name}'"
        return None

    def reordered(self, order: Sequence[str], label: Optional[str] = None) -> "CDGA":
        """The same algebra presented with generators in the given order."""
        if sorted(order) != sorted(self.table.names):
            raise StructuralError("A reordering must list every generator exactly once")
        table = GeneratorTable(self.table[self.table.index(name)] for name in order)
        images = [GradedPolynomial.generator(table, name) for name in self.table.names]
        differential = {
            name: substitute(self.differential(name), table, images) for name in self.table.names
        }
        algebra = CDGA(table, differential, label=label or self.label)
        violation = algebra.filtration_violation()
        if violation:
            raise ModelConstructionError(f"Reordered model is not a Sullivan algebra: {violation}")
        return algebra

    def evens_first(self) -> "CDGA":
        """Even generators first, input order kept within each parity class."""
        order = self.even_generators + self.odd_generators
        if list(order) == list(self.table.names):
            return self
        return self.reordered(order)


def apply_differential(a: GradedPolynomial, A: CDGA) -> GradedPolynomial:
    return A.d(a)


def check_d_squared(A: CDGA, max_degree: Optional[int] = None) -> Tuple[bool, Optional[Witness]]:
    """Check d(d(g)) = 0 on every generator, optionally on all monomials up to a degree.

    Returns:
        Tuple of (passed, witness). The witness names the offending
        generator or monomial and the nonzero residue.
    """
    for i, name in enumerate(A.table.names):
        residue = A.d(A.differential(i))
        if not residue.is_zero():
            logger.info("d^2 fails on generator %s", name)
            return False, Witness(check="d_squared", subject=name, residue=str(residue))

    if max_degree is not None:
        for n in range(max_degree + 1):
            for mono in basis_of_degree(n, A.table):
                residue = A.d(A.derivation.apply_monomial(mono))
                if not residue.is_zero():
                    return False, Witness(
                        check="d_squared",
                        subject=A.table.format_monomial(mono),
                        residue=str(residue),
                    )
    return True, None


def partial_derivative(f: GradedPolynomial, x: GeneratorKey) -> GradedPolynomial:
    """Ordinary partial derivative of a polynomial in even generators."""
    table = f.table
    i = table.index(x)
    if table.odd[i]:
        raise DomainError(f"Partial derivative along odd generator '{table.names[i]}' is not defined")
    odd_used = [table.names[j] for j in f.used_generators() if table.odd[j]]
    if odd_used:
        raise DomainError(f"Polynomial {f} is not in the even subalgebra (uses {', '.join(odd_used)})")
    terms = {}
    for mono, c in f.terms.items():
        e = mono[i]
        if e:
            lowered = list(mono)
            lowered[i] = e - 1
            terms[tuple(lowered)] = c * e
    return GradedPolynomial(table, terms)


def _copy_name(name: str, taken: set) -> str:
    candidate = name + "'"
    while candidate in taken:
        candidate += "'"
    return candidate


def tensor(A: CDGA, B: CDGA, label: Optional[str] = None) -> CDGA:
    """Tensor product A ⊗ B; B's generators are appended as primed tensor copies."""
    taken = set(A.table.names)
    copies = []
    for g in B.table:
        name = _copy_name(g.name, taken)
        taken.add(name)
        copies.append(
            Generator(
                name=name,
                degree=g.degree,
                origin="tensor-copy",
                copy_index=1,
                source=g.base_name,
            )
        )
    table = A.table.extend(copies)
    offset = len(A.table)
    right_images = [GradedPolynomial.generator(table, offset + j) for j in range(len(B.table))]

    differential: Dict[GeneratorKey, GradedPolynomial] = {}
    for i in range(len(A.table)):
        differential[i] = A.differential(i).extended(table)
    for j in range(len(B.table)):
        differential[offset + j] = substitute(B.differential(j), table, right_images)
    return CDGA(table, differential, label=label or f"{A.label}⊗{B.label}")


class CDGAMorphism:
    """A degree-0 algebra map between CDGAs, determined by generator images."""

    def __init__(
        self,
        source: CDGA,
        target: CDGA,
        values: Mapping[GeneratorKey, GradedPolynomial],
        validate: bool = True,
    ):
        self.source = source
        self.target = target
        images: List[Optional[GradedPolynomial]] = [None] * len(source.table)
        for key, value in values.items():
            i = source.table.index(key)
            if value.table != target.table:
                raise StructuralError(f"Image of '{source.table.names[i]}' lives over the wrong table")
            if not value.is_zero() and value.degrees() != [source.table.degrees[i]]:
                raise StructuralError(
                    f"Image of '{source.table.names[i]}' must have degree {source.table.degrees[i]}, got {value}"
                )
            images[i] = value
        missing = [source.table.names[i] for i, v in enumerate(images) if v is None]
        if missing:
            raise StructuralError(f"Morphism has no image for: {', '.join(missing)}")
        self.images: List[GradedPolynomial] = images  # type: ignore[assignment]
        self._cache: Dict[Monomial, GradedPolynomial] = {}
        if validate:
            ok, witness = self.check_chain_map()
            if not ok:
                raise ConsistencyError(
                    f"Map {source.label} -> {target.label} does not commute with d on "
                    f"'{witness.subject}': residue {witness.residue}"
                )

    def image(self, generator: GeneratorKey) -> GradedPolynomial:
        return self.images[self.source.table.index(generator)]

    def apply(self, poly: GradedPolynomial) -> GradedPolynomial:
        if poly.table != self.source.table:
            raise StructuralError("Polynomial does not live over the morphism's source")
        return substitute(poly, self.target.table, self.images, cache=self._cache)

    __call__ = apply

    def check_chain_map(self) -> Tuple[bool, Optional[Witness]]:
        for i, name in enumerate(self.source.table.names):
            residue = self.apply(self.source.differential(i)) - self.target.d(self.images[i])
            if not residue.is_zero():
                return False, Witness(check="chain_map", subject=name, residue=str(residue))
        return True, None

    def compose(self, other: "CDGAMorphism") -> "CDGAMorphism":
        """self ∘ other."""
        if other.target.table != self.source.table:
            raise StructuralError("Morphisms are not composable")
        values = {i: self.apply(other.images[i]) for i in range(len(other.source.table))}
        return CDGAMorphism(other.source, self.target, values, validate=False)

    def is_identity(self) -> bool:
        if self.source.table != self.target.table:
            return False
        return all(
            img == GradedPolynomial.generator(self.target.table, i) for i, img in enumerate(self.images)
        )
