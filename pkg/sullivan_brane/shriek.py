"""Inductive shriek cocycles φ: D^kV -> S^{k-1}V and their certificates.

Stage t adds the generator z_t of the base. With w = s^k z_t:

- w even:  Φ(f)(ν) = σz_t·f(ν) + (-1)^{|f|} f(τz_t·ν), and Φ(f) kills ν·w^l for l >= 1;
- w odd:   Φ(f)(ν·w) = (-1)^{|f|+|ν|} f(ν), and Φ(f) kills ν.

Maps are S-linear with f(aν) = (-1)^{|f||a|} a f(ν), and the Hom differential
is Df = d∘f - (-1)^{|f|} f∘d. A stage map vanishes on every monomial that
contains an even suspension, so it is stored on exterior monomials in the
odd suspensions only.
"""

import itertools
import logging
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import sympy
from pydantic import BaseModel, Field
from sympy import QQ

from sullivan_brane.algebra import GeneratorTable, GradedPolynomial, Monomial, basis_of_degree, substitute
from sullivan_brane.bounds import shriek_check_bound
from sullivan_brane.cdga import CDGA, partial_derivative
from sullivan_brane.exceptions import (
    ConsistencyError,
    DegreeBoundError,
    DomainError,
    PoincareDualityError,
    PurityError,
    StructuralError,
)
from sullivan_brane.homology import CohomologyBasis, PoincareData, cohomology, orientation_class
from sullivan_brane.mapping import DiskModel, RelativeTensor, relative_tensor
from sullivan_brane.models import Witness

logger = logging.getLogger(__name__)


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


class SLinearMap:
    """An S-linear map D^k(t) -> S^{k-1}(t), stored by its values on the free-module basis."""

    def __init__(
        self,
        disk: DiskModel,
        stage: int,
        degree: int,
        values: Mapping[Monomial, GradedPolynomial],
    ):
        self.disk = disk
        self.stage = stage
        self.degree = degree
        self.table: GeneratorTable = disk.algebra.table
        self.offset = disk.sphere_size
        self._values = {m: v for m, v in values.items() if not v.is_zero()}

    def __repr__(self) -> str:
        return f"SLinearMap(stage={self.stage}, degree={self.degree}, support={len(self._values)})"

    def split(self, mono: Monomial) -> Tuple[Monomial, Monomial]:
        """(S-part, suspension part) of a monomial of the disk model."""
        n = len(mono)
        off = self.offset
        return mono[:off] + (0,) * (n - off), (0,) * off + mono[off:]

    def value(self, mono: Monomial) -> GradedPolynomial:
        """φ on a basis monomial, i.e. a monomial in the suspensions only."""
        off = self.offset
        if any(mono[:off]):
            raise StructuralError(f"{self.table.format_monomial(mono)} is not a free-module basis monomial")
        vanishes = False
        for j in range(off, len(mono)):
            if not mono[j]:
                continue
            if j - off >= self.stage:
                raise DegreeBoundError(
                    f"{self.table.format_monomial(mono)} uses {self.table.names[j]}, "
                    f"which is not defined at stage {self.stage}"
                )
            if not self.table.odd[j]:
                vanishes = True
        if vanishes:
            return GradedPolynomial.zero(self.table)
        return self._values.get(mono, GradedPolynomial.zero(self.table))

    def support(self) -> Dict[Monomial, GradedPolynomial]:
        return dict(self._values)

    def apply(self, poly: GradedPolynomial) -> GradedPolynomial:
        if poly.table != self.table:
            raise StructuralError("Polynomial does not live over the disk model")
        result = GradedPolynomial.zero(self.table)
        for mono, c in poly.terms.items():
            a, nu = self.split(mono)
            val = self.value(nu)
            if val.is_zero():
                continue
            term = GradedPolynomial.monomial(self.table, a, c) * val
            result = result + term.scale(_sign(self.degree * self.table.monomial_degree(a)))
        return result

    __call__ = apply

    def scaled(self, value: Any) -> "SLinearMap":
        return SLinearMap(
            self.disk, self.stage, self.degree, {m: v.scale(value) for m, v in self._values.items()}
        )

    def basis_monomials(self, max_degree: int) -> Iterator[Monomial]:
        """Suspension monomials of the stage up to a degree, even suspensions included."""
        off = self.offset
        sub = GeneratorTable(self.table.generators[off : off + self.stage])
        pad = (0,) * (len(self.table) - off - self.stage)
        for n in range(max_degree + 1):
            for mono in basis_of_degree(n, sub):
                yield (0,) * off + mono + pad

    def cocycle_witness(self, max_degree: int) -> Optional[Witness]:
        """First basis monomial where d∘φ - (-1)^{|φ|} φ∘d is nonzero, if any."""
        D = self.disk.algebra
        sign = _sign(self.degree)
        for mono in self.basis_monomials(max_degree):
            lhs = D.d(self.value(mono))
            rhs = self.apply(D.derivation.apply_monomial(mono))
            residue = lhs - rhs.scale(sign)
            if not residue.is_zero():
                return Witness(
                    check="cocycle",
                    subject=self.table.format_monomial(mono),
                    residue=str(residue),
                )
        return None


def _odd_exterior(table: GeneratorTable, indices: Sequence[int]) -> Iterator[Monomial]:
    odd = [j for j in indices if table.odd[j]]
    for bits in itertools.product((0, 1), repeat=len(odd)):
        mono = [0] * len(table)
        for j, b in zip(odd, bits):
            mono[j] = b
        yield tuple(mono)


def phi_step(f: SLinearMap, disk: DiskModel, generator: Optional[str] = None) -> SLinearMap:
    """Φ(f): extend a stage t-1 map to stage t."""
    t = f.stage + 1
    names = disk.stage_names
    if t > len(names):
        raise StructuralError(f"Stage {f.stage} is already the last stage")
    z = names[t - 1]
    if generator is not None and generator != z:
        raise StructuralError(f"Stage {t} adds '{z}', not '{generator}'")

    table = f.table
    w_index = f.offset + t - 1
    w_degree = table.degrees[w_index]
    previous = range(f.offset, f.offset + t - 1)
    values: Dict[Monomial, GradedPolynomial] = {}

    if not table.odd[w_index]:
        sigma = disk.sigma[z]
        tau = disk.tau[z]
        degree = f.degree + w_degree + 1
        eps = _sign(f.degree)
        for nu in _odd_exterior(table, previous):
            nu_poly = GradedPolynomial.monomial(table, nu)
            values[nu] = sigma * f.value(nu) + f.apply(tau * nu_poly).scale(eps)
    else:
        degree = f.degree - w_degree
        for nu in _odd_exterior(table, previous):
            extended = list(nu)
            extended[w_index] = 1
            sign = _sign(f.degree + table.monomial_degree(nu))
            values[tuple(extended)] = f.value(nu).scale(sign)

    result = SLinearMap(disk, t, degree, values)
    logger.debug("φ_%d (adds %s): degree %d, %d nonzero values", t, z, degree, len(result.support()))
    return result


class ShriekCertificate(BaseModel):
    """The final cocycle φ together with the identities checked on it."""

    k: int = Field(..., ge=1)
    p: int
    q: int
    degree: int
    phi: Any
    stages: List[Any]
    checked_through: int
    top_value: Optional[Any] = None
    raw_top_value: Optional[Any] = None
    sigma_top: Optional[Any] = None
    top_matches: Optional[bool] = None
    mu_phi_one: Any
    jacobian: Optional[Any] = None
    jacobian_matches: Optional[bool] = None
    lambda_value: Optional[Any] = None
    nontrivial: Optional[bool] = None
    notes: List[str] = Field(default_factory=list)

    model_config = {"frozen": True, "arbitrary_types_allowed": True}


def _evens_first(base: CDGA) -> bool:
    p = len(base.even_indices)
    return base.even_indices == list(range(p))


def _top_monomial(disk: DiskModel, indices: Sequence[int]) -> Monomial:
    """Product of s^k x_i over base indices, in table order."""
    table = disk.algebra.table
    mono = [0] * len(table)
    for i in indices:
        mono[disk.sphere_size + i] = 1
    return tuple(mono)


def _sigma_product(disk: DiskModel, odd_names: Sequence[str]) -> GradedPolynomial:
    """σy_j ⋯ σy_1 for y_1..y_j given in order."""
    result = GradedPolynomial.one(disk.algebra.table)
    for name in odd_names:
        result = disk.sigma[name] * result
    return result


def build_phi(
    disk: DiskModel,
    max_degree: Optional[int] = None,
    check: bool = True,
    basis: Optional[CohomologyBasis] = None,
) -> ShriekCertificate:
    """Run the stage induction and assemble the certificate.

    Args:
        disk: Disk model over a base presented evens-first
        max_degree: Degree through which each stage is checked to be a
            cocycle; defaults to 2m + 2k
        check: Run the per-stage cocycle check
        basis: Cohomology of the base through degree m, computed if omitted

    Returns:
        ShriekCertificate; Jacobian, λ and nontriviality are filled in only
        for pure models and odd k.

    Raises:
        ConsistencyError: if some stage fails the cocycle check.
    """
    base = disk.base
    k = disk.k
    p, q = len(base.even_indices), len(base.odd_indices)
    evens = [base.table.degrees[i] for i in base.even_indices]
    odds = [base.table.degrees[i] for i in base.odd_indices]
    m = sum(odds) + sum(1 - a for a in evens)
    bound = max_degree if max_degree is not None else shriek_check_bound(m, k)
    table = disk.algebra.table

    current = SLinearMap(disk, 0, 0, {table.unit(): GradedPolynomial.one(table)})
    stages = [current]
    for t in range(1, len(disk.stage_names) + 1):
        current = phi_step(current, disk)
        if check:
            witness = current.cocycle_witness(bound)
            if witness is not None:
                raise ConsistencyError(
                    f"φ_{t} is not a cocycle on {witness.subject}: residue {witness.residue}"
                )
        stages.append(current)

    phi = current.scaled(_sign(p * (p + 3) // 2))
    S = disk.sphere.algebra
    mu_phi_one = disk.sphere.multiplication.apply(phi.value(table.unit()).restricted(S.table))
    logger.info("Shriek cocycle of degree %d built through %d stages", phi.degree, len(stages) - 1)

    notes: List[str] = []
    fields: Dict[str, Any] = {}
    pure = base.is_pure()
    if not pure:
        notes.append("model is not pure: certificate restricted to the cocycle check")
    elif k % 2 == 0:
        notes.append("k is even: Jacobian, λ and nontriviality need odd k and are omitted")
    elif not _evens_first(base):
        notes.append("base is not presented evens-first: Jacobian consequences omitted")
    elif p > q:
        notes.append(f"p = {p} > q = {q}: Jacobian consequences need p <= q")
    else:
        top = _top_monomial(disk, range(p))
        sigma_top = _sigma_product(disk, base.odd_generators)
        raw_top = current.value(top)
        fields["raw_top_value"] = raw_top
        fields["sigma_top"] = sigma_top
        fields["top_matches"] = raw_top == sigma_top
        fields["top_value"] = phi.value(top)
        if p == q:
            jacobian = jacobian_determinant(base)
            fields["jacobian"] = jacobian
            fields["jacobian_matches"] = mu_phi_one == jacobian
        else:
            fields["jacobian_matches"] = mu_phi_one.is_zero()
        fields["nontrivial"] = top_value_is_nontrivial(phi.value(top), disk)
        try:
            if basis is None:
                basis = cohomology(base, max(m, 0))
            P = orientation_class(basis, m)
            fields["lambda_value"] = _lambda_from(mu_phi_one, P, basis)
        except PoincareDualityError as e:
            notes.append(f"λ not computed: {e}")

    return ShriekCertificate(
        k=k,
        p=p,
        q=q,
        degree=phi.degree,
        phi=phi,
        stages=stages,
        checked_through=bound if check else -1,
        mu_phi_one=mu_phi_one,
        notes=notes,
        **fields,
    )


def _to_sympy(poly: GradedPolynomial, positions: Sequence[int], syms: Sequence[sympy.Symbol]) -> sympy.Expr:
    expr = sympy.Integer(0)
    for mono, c in poly.terms.items():
        term = QQ.to_sympy(c)
        for pos, sym in zip(positions, syms):
            if mono[pos]:
                term = term * sym ** mono[pos]
        expr = expr + term
    return expr


def jacobian_determinant(A: CDGA) -> GradedPolynomial:
    """det(∂(dy_j)/∂x_i) over the polynomial ring on the even generators.

    Raises:
        PurityError: if A is not pure.
        DomainError: if p != q.
    """
    if not A.is_pure():
        raise PurityError(f"{A.label} is not pure")
    evens, odds = A.even_indices, A.odd_indices
    if len(evens) != len(odds):
        raise DomainError(f"Jacobian needs p = q, got p = {len(evens)}, q = {len(odds)}")
    table = A.table
    if not evens:
        return GradedPolynomial.one(table)

    syms = sympy.symbols(f"x0:{len(evens)}")
    matrix = sympy.Matrix(
        [
            [_to_sympy(partial_derivative(A.differential(j), i), evens, syms) for i in evens]
            for j in odds
        ]
    )
    det = sympy.Poly(sympy.expand(matrix.det()), *syms)
    terms: Dict[Monomial, Any] = {}
    for exps, coeff in det.as_dict().items():
        mono = [0] * len(table)
        for pos, e in zip(evens, exps):
            mono[pos] = e
        terms[tuple(mono)] = QQ.from_sympy(coeff)
    return GradedPolynomial(table, terms)


def _lambda_from(mu_phi_one: GradedPolynomial, P: PoincareData, basis: CohomologyBasis) -> Any:
    if mu_phi_one.table != basis.algebra.table:
        raise StructuralError("μφ(1) does not live over the base of the cohomology basis")
    if mu_phi_one.is_zero():
        return QQ.zero
    return P.pairing(basis.reduce(mu_phi_one))


def lambda_gamma(cert: ShriekCertificate, P: PoincareData, basis: CohomologyBasis) -> Any:
    """ω-coefficient of [μφ(1)].

    Raises:
        ConsistencyError: if μφ(1) is not a cocycle.
    """
    return _lambda_from(cert.mu_phi_one, P, basis)


def alpha_coefficients(disk: DiskModel) -> Dict[Tuple[int, int], GradedPolynomial]:
    """α_{ji} with τy_j = (-1)^k Σ_i α_{ji}·s^k x_i, indexed from 1, as elements of S.

    Raises:
        PurityError: if the base is not pure.
        ConsistencyError: if some term of τy_j is not linear in the s^k x_i.
    """
    base = disk.base
    if not base.is_pure():
        raise PurityError(f"{base.label} is not pure")
    table = disk.algebra.table
    S = disk.sphere.algebra
    off = disk.sphere_size
    evens, odds = base.even_indices, base.odd_indices
    column = {off + i: col for col, i in enumerate(evens, start=1)}
    sign = _sign(disk.k)

    alphas: Dict[Tuple[int, int], GradedPolynomial] = {}
    for row, j in enumerate(odds, start=1):
        collected: Dict[int, Dict[Monomial, Any]] = {col: {} for col in column.values()}
        for mono, c in disk.tau[base.table.names[j]].terms.items():
            suspensions = [idx for idx in range(off, len(mono)) if mono[idx]]
            if len(suspensions) != 1 or mono[suspensions[0]] != 1 or suspensions[0] not in column:
                raise ConsistencyError(
                    f"τ({base.table.names[j]}) has a term {table.format_monomial(mono)} "
                    "that is not linear in the even suspensions"
                )
            col = column[suspensions[0]]
            a = mono[:off]
            collected[col][a] = collected[col].get(a, QQ.zero) + c * sign
        for col, terms in collected.items():
            alphas[(row, col)] = GradedPolynomial(S.table, terms)
    return alphas


def check_partial_derivatives(disk: DiskModel) -> List[Witness]:
    """μ(α_{ji}) = ∂(dy_j)/∂x_i for every pair; returns the failures."""
    base = disk.base
    mu = disk.sphere.multiplication
    witnesses = []
    for (row, col), alpha in alpha_coefficients(disk).items():
        y = base.table.names[base.odd_indices[row - 1]]
        x = base.table.names[base.even_indices[col - 1]]
        expected = partial_derivative(base.differential(y), x)
        found = mu.apply(alpha)
        if found != expected:
            witnesses.append(
                Witness(
                    check="partial_derivative",
                    subject=f"alpha({y},{x})",
                    residue=str(found - expected),
                )
            )
    return witnesses


def cofactor_determinant(matrix: Sequence[Sequence[GradedPolynomial]], table: GeneratorTable) -> GradedPolynomial:
    """Laplace expansion along the first row; entries must commute."""
    n = len(matrix)
    if n == 0:
        return GradedPolynomial.one(table)
    result = GradedPolynomial.zero(table)
    for col in range(n):
        entry = matrix[0][col]
        if entry.is_zero():
            continue
        minor = [[row[c] for c in range(n) if c != col] for row in matrix[1:]]
        result = result + (entry * cofactor_determinant(minor, table)).scale(_sign(col))
    return result


def _require_jacobian_setting(cert: ShriekCertificate, disk: DiskModel) -> None:
    if not disk.base.is_pure():
        raise PurityError(f"{disk.base.label} is not pure")
    if disk.k % 2 == 0:
        raise DomainError("stage identities are stated for odd k")
    if not _evens_first(disk.base):
        raise DomainError("the base must be presented evens-first")
    if len(cert.stages) != len(disk.stage_names) + 1:
        raise StructuralError("certificate does not belong to this disk model")


def check_evenpart_identity(cert: ShriekCertificate, disk: DiskModel) -> List[Witness]:
    """φ_i(s^k x_{[i]∖I}) = 1 if I is empty, else 0, for 0 <= i <= p."""
    _require_jacobian_setting(cert, disk)
    table = disk.algebra.table
    witnesses = []
    for i in range(cert.p + 1):
        for size in range(i + 1):
            for removed in itertools.combinations(range(i), size):
                kept = [l for l in range(i) if l not in removed]
                mono = _top_monomial(disk, kept)
                value = cert.stages[i].value(mono)
                expected = GradedPolynomial.one(table) if not removed else GradedPolynomial.zero(table)
                if value != expected:
                    witnesses.append(
                        Witness(
                            check="evenpart",
                            subject=f"phi_{i}({table.format_monomial(mono)})",
                            residue=str(value - expected),
                        )
                    )
    return witnesses


def _ideal_quotient(value: GradedPolynomial, disk: DiskModel, j: int) -> GradedPolynomial:
    """Image of a sphere-part element modulo (σy_1, ..., σy_j)."""
    base = disk.base
    table = disk.algebra.table
    r = len(base.table)
    images = [GradedPolynomial.generator(table, i) for i in range(len(table))]
    for idx in base.odd_indices[:j]:
        if disk.k == 1:
            images[r + idx] = GradedPolynomial.generator(table, idx)
        else:
            images[r + idx] = GradedPolynomial.zero(table)
    return substitute(value, table, images)


def check_oddpart_identities(cert: ShriekCertificate, disk: DiskModel) -> List[Witness]:
    """Values of φ_{p+j} on s^k x_{[p]∖I} with |I| = n.

    - n = 0: σy_j ⋯ σy_1;
    - 0 < n < j: an element of the ideal (σy_1, ..., σy_j);
    - n = j: (-1)^{Σ I + pj} det(α_{t,i_r}) by cofactor expansion;
    - n > j: zero.
    """
    _require_jacobian_setting(cert, disk)
    table = disk.algebra.table
    p, q = cert.p, cert.q
    alphas = {key: a.extended(table) for key, a in alpha_coefficients(disk).items()}
    odd_names = disk.base.odd_generators
    witnesses = []

    def fail(j: int, mono: Monomial, residue: GradedPolynomial, check: str) -> None:
        witnesses.append(
            Witness(check=check, subject=f"phi_{p + j}({table.format_monomial(mono)})", residue=str(residue))
        )

    for j in range(q + 1):
        stage = cert.stages[p + j]
        for n in range(p + 1):
            for removed in itertools.combinations(range(1, p + 1), n):
                mono = _top_monomial(disk, [i - 1 for i in range(1, p + 1) if i not in removed])
                value = stage.value(mono)
                if n == 0:
                    expected = _sigma_product(disk, odd_names[:j])
                    if value != expected:
                        fail(j, mono, value - expected, "oddpart_top")
                elif n < j:
                    residue = _ideal_quotient(value, disk, j)
                    if not residue.is_zero():
                        fail(j, mono, residue, "oddpart_ideal")
                elif n == j:
                    matrix = [[alphas[(t, i)] for i in removed] for t in range(1, j + 1)]
                    expected = cofactor_determinant(matrix, table).scale(_sign(sum(removed) + p * j))
                    if value != expected:
                        fail(j, mono, value - expected, "oddpart_determinant")
                elif not value.is_zero():
                    fail(j, mono, value, "oddpart_vanishing")
    return witnesses


def _killed_generators(disk: DiskModel) -> List[int]:
    """Indices generating the ideal I = (x_i⊗1, y_j⊗1, σx_i), up to a change of variables."""
    base = disk.base
    r = len(base.table)
    return list(range(r)) + [r + i for i in base.even_indices]


def _project(poly: GradedPolynomial, killed: Sequence[int]) -> GradedPolynomial:
    return GradedPolynomial(
        poly.table, {m: c for m, c in poly.terms.items() if not any(m[i] for i in killed)}
    )


def top_value_is_nontrivial(value: GradedPolynomial, disk: DiskModel) -> bool:
    """Whether a value reduces to a nonzero multiple of σy_{[q]} modulo I.

    Raises:
        PurityError: if d(I) is not contained in I.
    """
    base = disk.base
    D = disk.algebra
    table = D.table
    killed = _killed_generators(disk)
    generators = [GradedPolynomial.generator(table, i) for i in range(len(base.table))]
    generators += [disk.sigma[base.table.names[i]] for i in base.even_indices]
    for g in generators:
        residue = _project(D.d(g), killed)
        if not residue.is_zero():
            raise PurityError(f"d({g}) = {D.d(g)} leaves the ideal I; the model is not pure")

    target = _project(_sigma_product(disk, base.odd_generators), killed)
    residue = _project(value, killed)
    if residue.is_zero() or target.is_zero():
        return False
    mono, lead = target.leading_term()
    scale = residue.coefficient(mono) / lead
    return bool(scale) and residue == target.scale(scale)


def nontriviality_check(cert: ShriekCertificate, disk: DiskModel) -> bool:
    """Evaluate φ(s^k x_{[p]}) modulo I against σy_{[q]}."""
    if not disk.base.is_pure():
        raise PurityError(f"{disk.base.label} is not pure")
    top = _top_monomial(disk, disk.base.even_indices)
    return top_value_is_nontrivial(cert.phi.value(top), disk)


class ExtLift:
    """The map id ⊗ φ on a relative tensor product E ⊗_S D^kV -> E."""

    def __init__(self, phi: SLinearMap, tensor: RelativeTensor):
        if tensor.right.algebra.table != phi.table:
            raise StructuralError("φ and the relative tensor use different disk models")
        if phi.stage != len(phi.disk.stage_names):
            raise StructuralError("extlift needs φ at the full stage")
        self.phi = phi
        self.tensor = tensor
        self.degree = phi.degree
        self._sphere_table = tensor.sphere.algebra.table
        self._left_table = tensor.left.table

    def apply(self, poly: GradedPolynomial) -> GradedPolynomial:
        table = self.tensor.algebra.table
        if poly.table != table:
            raise StructuralError("Polynomial does not live over the relative tensor model")
        n_left = self.tensor.left_size
        pad = (0,) * self.phi.offset
        result = GradedPolynomial.zero(self._left_table)
        for mono, c in poly.terms.items():
            a, nu = mono[:n_left], pad + mono[n_left:]
            value = self.phi.value(nu)
            if value.is_zero():
                continue
            value = value.restricted(self._sphere_table).extended(self._left_table)
            term = GradedPolynomial.monomial(self._left_table, a, c) * value
            result = result + term.scale(_sign(self.degree * self._left_table.monomial_degree(a)))
        return result

    __call__ = apply

    def evaluate_at_unit(self) -> GradedPolynomial:
        return self.apply(GradedPolynomial.one(self.tensor.algebra.table))

    def scaled(self, value: Any) -> "ExtLift":
        return ExtLift(self.phi.scaled(value), self.tensor)

    def cocycle_witness(self, max_degree: int) -> Optional[Witness]:
        """Check d∘F = (-1)^{|F|} F∘d on the suspension monomials up to a degree."""
        algebra = self.tensor.algebra
        left = self.tensor.left
        table = algebra.table
        n_left = self.tensor.left_size
        sub = GeneratorTable(table.generators[n_left:])
        sign = _sign(self.degree)
        for n in range(max_degree + 1):
            for part in basis_of_degree(n, sub):
                mono = (0,) * n_left + part
                lhs = left.d(self.apply(GradedPolynomial.monomial(table, mono)))
                rhs = self.apply(algebra.derivation.apply_monomial(mono))
                residue = lhs - rhs.scale(sign)
                if not residue.is_zero():
                    return Witness(check="extlift_cocycle", subject=table.format_monomial(mono), residue=str(residue))
        return None


def extlift(phi: SLinearMap, left: CDGA) -> ExtLift:
    """id ⊗ φ on left ⊗_S D^kV for an S-algebra ``left``."""
    return ExtLift(phi, relative_tensor(left, phi.disk.sphere, phi.disk))
