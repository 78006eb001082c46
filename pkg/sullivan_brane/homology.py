"""Degreewise cohomology of CDGAs, Poincaré duality data and ellipticity checks."""

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel
from sympy import QQ

from sullivan_brane.algebra import GeneratorTable, GradedPolynomial, Monomial, basis_of_degree, substitute
from sullivan_brane.bounds import DegreeBound, window_width
from sullivan_brane.cdga import CDGA, CDGAMorphism, tensor
from sullivan_brane.exceptions import (
    ConsistencyError,
    DegreeBoundError,
    FinitenessError,
    PoincareDualityError,
    PurityError,
    StructuralError,
)
from sullivan_brane.linalg import Row, determinant, echelon, invert, left_kernel, rank, reduce_vector
from sullivan_brane.models import EllipticReport

logger = logging.getLogger(__name__)

EULER_CRITERION_NOTE = (
    "euler characteristic criterion: chi != 0 iff p = q; the alternative reading "
    "dim pi_even < dim pi_odd iff chi > 0 is not used"
)


class CohomologyGroup:
    """H^n of a CDGA: boundary echelon data plus cocycle representatives.

    Groups built in boundaries-only mode can decide exactness but have no
    representatives.
    """

    def __init__(
        self,
        degree: int,
        table: GeneratorTable,
        monomials: Sequence[Monomial],
        boundary_rows: List[Row],
        boundary_pivots: List[int],
        representative_rows: Optional[List[Row]] = None,
        representative_pivots: Optional[List[int]] = None,
    ):
        self.degree = degree
        self.table = table
        self.monomials = tuple(monomials)
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self.boundary_rows = boundary_rows
        self.boundary_pivots = boundary_pivots
        self.complete = representative_rows is not None
        self.representative_rows = representative_rows or []
        self.representative_pivots = representative_pivots or []

    @property
    def dimension(self) -> int:
        if not self.complete:
            raise DegreeBoundError(f"H^{self.degree} was computed in boundaries-only mode", self.degree)
        return len(self.representative_rows)

    def vector(self, poly: GradedPolynomial) -> Row:
        row: Row = {}
        for mono, c in poly.terms.items():
            i = self.index.get(mono)
            if i is None:
                raise StructuralError(
                    f"Term {self.table.format_monomial(mono)} is not of degree {self.degree}"
                )
            row[i] = c
        return row

    def polynomial(self, row: Row) -> GradedPolynomial:
        return GradedPolynomial(self.table, {self.monomials[i]: c for i, c in row.items()})

    def representative(self, i: int) -> GradedPolynomial:
        return self.polynomial(self.representative_rows[i])

    def residual(self, poly: GradedPolynomial) -> Row:
        return reduce_vector(self.vector(poly), self.boundary_rows, self.boundary_pivots)

    def is_coboundary(self, poly: GradedPolynomial) -> bool:
        return not self.residual(poly)

    def coordinates(self, poly: GradedPolynomial) -> Tuple[Any, ...]:
        """Coordinates of a cocycle's class in the representative basis.

        Raises:
            ConsistencyError: if ``poly`` is not a cocycle.
        """
        if not self.complete:
            raise DegreeBoundError(f"H^{self.degree} was computed in boundaries-only mode", self.degree)
        residue = self.residual(poly)
        coords = [residue.get(p, QQ.zero) for p in self.representative_pivots]
        left = dict(residue)
        for row, c in zip(self.representative_rows, coords):
            if not c:
                continue
            for j, a in row.items():
                value = left.get(j, QQ.zero) - c * a
                if value:
                    left[j] = value
                else:
                    left.pop(j, None)
        if left:
            raise ConsistencyError(f"{poly} is not a cocycle in degree {self.degree}")
        return tuple(coords)


class CohomologyClass:
    """A class in H^n given by coordinates in a CohomologyBasis."""

    __slots__ = ("degree", "coordinates", "basis")

    def __init__(self, degree: int, coordinates: Sequence[Any], basis: "CohomologyBasis"):
        self.degree = degree
        self.coordinates = tuple(QQ.convert(c) for c in coordinates)
        self.basis = basis

    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def _check(self, other: "CohomologyClass") -> None:
        if other.basis is not self.basis or other.degree != self.degree:
            raise StructuralError("Classes live in different cohomology groups")

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        self._check(other)
        return CohomologyClass(self.degree, [a + b for a, b in zip(self.coordinates, other.coordinates)], self.basis)

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        self._check(other)
        return CohomologyClass(self.degree, [a - b for a, b in zip(self.coordinates, other.coordinates)], self.basis)

    def scale(self, value: Any) -> "CohomologyClass":
        c = QQ.convert(value)
        return CohomologyClass(self.degree, [c * a for a in self.coordinates], self.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return (
            other.basis is self.basis
            and other.degree == self.degree
            and other.coordinates == self.coordinates
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def representative(self) -> GradedPolynomial:
        group = self.basis.group(self.degree)
        result = GradedPolynomial.zero(self.basis.algebra.table)
        for i, c in enumerate(self.coordinates):
            if c:
                result = result + group.representative(i).scale(c)
        return result

    def __str__(self) -> str:
        parts = [f"{c}*e{self.degree}_{i}" for i, c in enumerate(self.coordinates) if c]
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"CohomologyClass(H^{self.degree}: {self})"


def _group(A: CDGA, n: int, complete: bool) -> CohomologyGroup:
    table = A.table
    monomials = basis_of_degree(n, table)
    index = {m: i for i, m in enumerate(monomials)}

    def to_row(poly: GradedPolynomial, idx: Dict[Monomial, int]) -> Row:
        return {idx[m]: c for m, c in poly.terms.items()}

    images = [to_row(A.derivation.apply_monomial(m), index) for m in basis_of_degree(n - 1, table)]
    b_rows, b_pivots = echelon(images, len(monomials))
    if not complete:
        return CohomologyGroup(n, table, monomials, b_rows, b_pivots)

    above = basis_of_degree(n + 1, table)
    above_index = {m: i for i, m in enumerate(above)}
    d_rows = [to_row(A.derivation.apply_monomial(m), above_index) for m in monomials]
    cycles = left_kernel(d_rows, len(above))
    residues = [reduce_vector(z, b_rows, b_pivots) for z in cycles]
    h_rows, h_pivots = echelon([r for r in residues if r], len(monomials))
    if len(cycles) - len(b_pivots) != len(h_pivots):
        raise ConsistencyError(
            f"Degree {n}: {len(cycles)} cocycles, {len(b_pivots)} coboundaries, "
            f"{len(h_pivots)} classes; boundaries are not cocycles"
        )
    logger.debug(
        "H^%d of %s: %d monomials, rank d = %d, dim H = %d",
        n, A.label, len(monomials), len(b_pivots), len(h_pivots),
    )
    return CohomologyGroup(n, table, monomials, b_rows, b_pivots, h_rows, h_pivots)


class CohomologyBasis:
    """Cohomology of a CDGA in degrees 0..max_degree, with boundary data above on demand."""

    def __init__(self, algebra: CDGA, max_degree: int, groups: Dict[int, CohomologyGroup]):
        self.algebra = algebra
        self.max_degree = max_degree
        self._groups = groups
        self._boundaries: Dict[int, CohomologyGroup] = {}

    def group(self, n: int) -> CohomologyGroup:
        if n in self._groups:
            return self._groups[n]
        if n < 0:
            group = CohomologyGroup(n, self.algebra.table, (), [], [], [], [])
            self._groups[n] = group
            return group
        raise DegreeBoundError(f"H^{n} of {self.algebra.label} is above the bound {self.max_degree}", n)

    def boundaries(self, n: int) -> CohomologyGroup:
        """Group in degree n, computed in boundaries-only mode above the bound."""
        if n in self._groups or n < 0:
            return self.group(n)
        if n not in self._boundaries:
            self._boundaries[n] = _group(self.algebra, n, complete=False)
        return self._boundaries[n]

    def dimension(self, n: int) -> int:
        return self.group(n).dimension

    def dimensions(self) -> List[int]:
        return [self.dimension(n) for n in range(self.max_degree + 1)]

    def basis_classes(self, n: int) -> List[CohomologyClass]:
        dim = self.dimension(n)
        return [
            CohomologyClass(n, [QQ.one if j == i else QQ.zero for j in range(dim)], self)
            for i in range(dim)
        ]

    def zero_class(self, n: int) -> CohomologyClass:
        return CohomologyClass(n, [QQ.zero] * self.dimension(n), self)

    def _degree_of(self, poly: GradedPolynomial, degree: Optional[int]) -> int:
        found = poly.degree
        if found is None:
            if degree is None:
                raise StructuralError("The degree of the zero polynomial must be given")
            return degree
        if degree is not None and degree != found:
            raise StructuralError(f"Polynomial of degree {found} reduced in degree {degree}")
        return found

    def reduce(self, poly: GradedPolynomial, degree: Optional[int] = None) -> CohomologyClass:
        """Class of a cocycle."""
        n = self._degree_of(poly, degree)
        if poly.table != self.algebra.table:
            raise StructuralError("Polynomial does not live over this algebra")
        return CohomologyClass(n, self.group(n).coordinates(poly), self)

    def is_coboundary(self, poly: GradedPolynomial, degree: Optional[int] = None) -> bool:
        if poly.is_zero():
            return True
        n = self._degree_of(poly, degree)
        return self.boundaries(n).is_coboundary(poly)

    def unit(self) -> CohomologyClass:
        return self.reduce(GradedPolynomial.one(self.algebra.table))


def cohomology(A: CDGA, max_degree: int) -> CohomologyBasis:
    """H^n(A) for 0 <= n <= max_degree by exact ranks of d."""
    DegreeBound(max_degree, label=f"cohomology of {A.label}")
    groups = {n: _group(A, n, complete=True) for n in range(max_degree + 1)}
    basis = CohomologyBasis(A, max_degree, groups)
    logger.info("Cohomology of %s through degree %d: %s", A.label, max_degree, basis.dimensions())
    return basis


def euler_characteristic(basis: CohomologyBasis, m: int, window: Optional[int] = None) -> int:
    """Σ_{n<=m} (-1)^n dim H^n, after checking H vanishes in the window above m.

    Raises:
        DegreeBoundError: if the window lies above the basis bound.
        FinitenessError: if some H^n in the window is nonzero.
    """
    width = window or window_width(basis.algebra.table)
    top = max(m, 0)
    bound = DegreeBound(basis.max_degree, label="euler characteristic window")
    nonzero = [n for n in bound.window(top, width) if basis.dimension(n)]
    if nonzero:
        raise FinitenessError(
            f"model not verifiably finite-dimensional: H^{nonzero[0]} != 0 above degree {top}"
        )
    return sum((-1) ** n * basis.dimension(n) for n in range(0, top + 1))


def cup(a: CohomologyClass, b: CohomologyClass, basis: CohomologyBasis) -> CohomologyClass:
    degree = a.degree + b.degree
    DegreeBound(basis.max_degree, label="cup product").require(degree)
    return basis.reduce(a.representative * b.representative, degree=degree)


class PoincareData(BaseModel):
    """Formal dimension, orientation class and fundamental pairing."""

    formal_dimension: int
    omega: Any
    basis: Any

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    def pairing(self, cls: CohomologyClass) -> Any:
        """ω-coefficient of a class; zero outside degree m."""
        if cls.degree != self.formal_dimension:
            return QQ.zero
        return cls.coordinates[0]


def orientation_class(basis: CohomologyBasis, m: int) -> PoincareData:
    """ω as the basis class of H^m; its representative has leading coefficient 1."""
    if m < 0 or m > basis.max_degree or basis.dimension(m) != 1:
        found = basis.dimension(m) if 0 <= m <= basis.max_degree else "unknown"
        raise PoincareDualityError(
            f"not a Poincaré duality model in degree {m} (dim H^{m} = {found})"
        )
    omega = basis.basis_classes(m)[0]
    return PoincareData(formal_dimension=m, omega=omega, basis=basis)


def pairing_matrix(basis: CohomologyBasis, P: PoincareData, j: int) -> List[List[Any]]:
    """Matrix of ⟨b_i ⌣ c_l, [M]⟩ for bases of H^j and H^{m-j}."""
    m = P.formal_dimension
    left = basis.basis_classes(j)
    right = basis.basis_classes(m - j)
    return [[P.pairing(cup(b, c, basis)) for c in right] for b in left]


def check_poincare_duality(basis: CohomologyBasis, P: PoincareData) -> Tuple[bool, Optional[str]]:
    """Check that every pairing H^j × H^{m-j} -> Q is nondegenerate.

    Returns:
        Tuple of (passed, description of the first degenerate degree)
    """
    m = P.formal_dimension
    for j in range(m + 1):
        a, b = basis.dimension(j), basis.dimension(m - j)
        if a != b:
            return False, f"dim H^{j} = {a} but dim H^{m - j} = {b}"
        if a and not determinant(pairing_matrix(basis, P, j)):
            return False, f"pairing H^{j} x H^{m - j} is degenerate"
    return True, None


def _dual_basis(basis: CohomologyBasis, P: PoincareData, j: int) -> List[GradedPolynomial]:
    """Representatives of the dual basis b^i of H^{m-j}, ⟨b_i ⌣ b^l⟩ = δ_il."""
    m = P.formal_dimension
    matrix = pairing_matrix(basis, P, j)
    if len(matrix) != basis.dimension(m - j):
        raise PoincareDualityError(f"dim H^{j} != dim H^{m - j}")
    if not matrix:
        return []
    if not determinant(matrix):
        raise PoincareDualityError(f"pairing H^{j} x H^{m - j} is degenerate")
    transpose = [list(col) for col in zip(*matrix)]
    q = invert(transpose)
    right = [c.representative for c in basis.basis_classes(m - j)]
    duals = []
    for i in range(len(matrix)):
        value = GradedPolynomial.zero(basis.algebra.table)
        for l, rep in enumerate(right):
            if q[i][l]:
                value = value + rep.scale(q[i][l])
        duals.append(value)
    return duals


class DiagonalClass(BaseModel):
    """Σ (-1)^{|b_i|} b_i × b^i in the model of M × M, with its μ-pullback."""

    algebra: Any
    representative: Any
    pullback: Any
    euler_characteristic: int

    model_config = {"frozen": True, "arbitrary_types_allowed": True}


def diagonal_class(basis: CohomologyBasis, P: PoincareData) -> DiagonalClass:
    """Diagonal class of a Poincaré duality model.

    Raises:
        PoincareDualityError: if some pairing is degenerate.
        ConsistencyError: if the μ-pullback differs from χ·ω.
    """
    A = basis.algebra
    m = P.formal_dimension
    product = tensor(A, A, label=f"{A.label}x{A.label}")
    n = len(A.table)
    table = product.table
    right_images = [GradedPolynomial.generator(table, n + i) for i in range(n)]

    representative = GradedPolynomial.zero(table)
    for j in range(m + 1):
        duals = _dual_basis(basis, P, j)
        for cls, dual in zip(basis.basis_classes(j), duals):
            term = cls.representative.extended(table) * substitute(dual, table, right_images)
            representative = representative + (term.scale(-1) if j % 2 else term)

    if not product.d(representative).is_zero():
        raise ConsistencyError("Diagonal representative is not a cocycle")

    mu = CDGAMorphism(
        product,
        A,
        {i: A.generator(i % n) for i in range(2 * n)},
    )
    pullback = basis.reduce(mu.apply(representative), degree=m)
    chi = sum((-1) ** j * basis.dimension(j) for j in range(m + 1))
    if pullback != P.omega.scale(chi):
        raise ConsistencyError(f"μ-pullback of the diagonal class is {pullback}, expected {chi}·ω")
    logger.info("Diagonal class of %s pulls back to %d·ω", A.label, chi)
    return DiagonalClass(algebra=product, representative=representative, pullback=pullback, euler_characteristic=chi)


def _even_relations(A: CDGA) -> Tuple[GeneratorTable, List[GradedPolynomial]]:
    if not A.is_pure():
        raise PurityError(f"{A.label} is not pure")
    even_table = GeneratorTable(A.table[i] for i in A.even_indices)
    images = []
    position = {i: j for j, i in enumerate(A.even_indices)}
    for i in range(len(A.table)):
        if i in position:
            images.append(GradedPolynomial.generator(even_table, position[i]))
        else:
            images.append(GradedPolynomial.zero(even_table))
    relations = [substitute(A.differential(i), even_table, images) for i in A.odd_indices]
    return even_table, relations


def quotient_dimensions(A: CDGA, max_degree: int) -> List[int]:
    """dim of ∧V^even/(dy_1, ..., dy_q) in degrees 0..max_degree."""
    even_table, relations = _even_relations(A)
    dims = []
    for n in range(max_degree + 1):
        monomials = basis_of_degree(n, even_table)
        index = {mono: i for i, mono in enumerate(monomials)}
        rows = []
        for rel in relations:
            if rel.is_zero():
                continue
            shift = n - rel.degree
            for mono in basis_of_degree(shift, even_table):
                product = GradedPolynomial.monomial(even_table, mono) * rel
                rows.append({index[m]: c for m, c in product.terms.items()})
        dims.append(len(monomials) - rank(rows, len(monomials)))
    return dims


def quotient_is_finite(A: CDGA) -> bool:
    """Window test: the quotient vanishes in (top, top + max a_i]."""
    evens = [A.table.degrees[i] for i in A.even_indices]
    if not evens:
        return True
    odds = [A.table.degrees[i] for i in A.odd_indices]
    top = max(sum(b + 1 for b in odds) - sum(evens), 0)
    width = max(evens)
    dims = quotient_dimensions(A, top + width)
    return not any(dims[top + 1 : top + width + 1])


def loop_dimension(m: int, p: int, q: int, k: int) -> int:
    """Formal dimension of the k-fold sphere-space stage."""
    if k % 2:
        return m - (q - p) * (k - 1)
    return -m - (k - 2) * p + k * q


def elliptic_report(A: CDGA, k: int = 1) -> EllipticReport:
    """Purity, regularity and dimension data of a Sullivan model."""
    evens = [A.table.degrees[i] for i in A.even_indices]
    odds = [A.table.degrees[i] for i in A.odd_indices]
    p, q = len(evens), len(odds)
    m = sum(odds) + sum(1 - a for a in evens)
    pure = A.is_pure()
    notes: List[str] = []

    regular = False
    if pure:
        regular = p == q and quotient_is_finite(A)
        if p != q and quotient_is_finite(A):
            notes.append(f"quotient by dy is finite but p = {p} != q = {q}")

    chi: Optional[int] = None
    width = window_width(A.table)
    try:
        basis = cohomology(A, max(m, 0) + width)
        chi = euler_characteristic(basis, m, width)
    except FinitenessError as e:
        notes.append(str(e))
    notes.append(EULER_CRITERION_NOTE)

    return EllipticReport(
        k=k,
        p=p,
        q=q,
        even_degrees=evens,
        odd_degrees=odds,
        euler_characteristic=chi,
        formal_dimension=m,
        loop_dimension=loop_dimension(m, p, q, k),
        pure=pure,
        regular_sequence=regular,
        notes=notes,
    )


def require_pure_elliptic(report: EllipticReport) -> None:
    """Reject models the Jacobian and shriek consequences do not apply to.

    Raises:
        PurityError: for a non-pure model with nonzero Euler characteristic.
    """
    if not report.pure and report.euler_characteristic:
        raise PurityError(
            "model is not pure but has nonzero Euler characteristic; a rationally elliptic "
            "space with χ != 0 has a pure minimal model, so the input is not minimal"
        )
