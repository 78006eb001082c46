"""Non-symmetric brane coproduct, vanishing verification and orientation reversal.

The coproduct on the cohomology of the sphere-space model is computed from
its closed formula δ_ns(u×v) = ev*(ω·c*(u))·v.
"""

import logging
import random
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field
from sympy import QQ

from sullivan_brane.algebra import GradedPolynomial, basis_of_degree
from sullivan_brane.bounds import DegreeBound, shriek_check_bound
from sullivan_brane.cdga import CDGA, CDGAMorphism
from sullivan_brane.exceptions import (
    ConsistencyError,
    DomainError,
    SullivanBraneError,
)
from sullivan_brane.homology import (
    CohomologyBasis,
    CohomologyClass,
    PoincareData,
    cohomology,
    elliptic_report,
    orientation_class,
)
from sullivan_brane.linalg import left_kernel, rank
from sullivan_brane.mapping import (
    DiskModel,
    SphereModel,
    SphereSpaceModel,
    build_sphere_space_model,
    prepare_base,
)
from sullivan_brane.models import (
    DEFAULT_MAX_DEGREE,
    PERTURBATION_TRIALS,
    ClassVerdict,
    VanishingReport,
    Witness,
)
from sullivan_brane.shriek import ExtLift, ShriekCertificate, SLinearMap, _lambda_from

logger = logging.getLogger(__name__)


def _coproduct_representative(
    u: GradedPolynomial,
    v: GradedPolynomial,
    ssm: SphereSpaceModel,
    P: PoincareData,
) -> GradedPolynomial:
    omega = P.omega.representative
    return ssm.evaluation.apply(omega * ssm.constants.apply(u)) * v


def ns_coproduct(
    u: CohomologyClass,
    v: CohomologyClass,
    ssm: SphereSpaceModel,
    P: PoincareData,
) -> CohomologyClass:
    """δ_ns(u×v) = ev*(ω·c*(u))·v.

    Raises:
        DegreeBoundError: if deg u + deg v + m is above the basis bound.
    """
    basis = u.basis
    degree = u.degree + v.degree + P.formal_dimension
    DegreeBound(basis.max_degree, label="coproduct").require(degree)
    product = _coproduct_representative(u.representative, v.representative, ssm, P)
    return basis.reduce(product, degree=degree)


class CoproductTable(BaseModel):
    """δ_ns on all pairs of basis classes whose output fits the bound."""

    k: int
    max_degree: int
    formal_dimension: int
    basis: Any
    entries: Dict[Tuple[int, int, int, int], Any] = Field(default_factory=dict)

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    def value(self, u: CohomologyClass, v: CohomologyClass) -> CohomologyClass:
        """Bilinear extension of the table to arbitrary classes."""
        result = self.basis.zero_class(u.degree + v.degree + self.formal_dimension)
        for i, a in enumerate(u.coordinates):
            for j, b in enumerate(v.coordinates):
                if a and b:
                    result = result + self.entries[(u.degree, i, v.degree, j)].scale(a * b)
        return result


def coproduct_table(
    ssm: SphereSpaceModel,
    basis: CohomologyBasis,
    P: PoincareData,
    max_degree: Optional[int] = None,
) -> CoproductTable:
    bound = min(max_degree if max_degree is not None else basis.max_degree, basis.max_degree)
    m = P.formal_dimension
    entries = {}
    for du in range(0, bound - m + 1):
        for dv in range(0, bound - m - du + 1):
            for i, u in enumerate(basis.basis_classes(du)):
                for j, v in enumerate(basis.basis_classes(dv)):
                    entries[(du, i, dv, j)] = ns_coproduct(u, v, ssm, P)
    logger.info("Coproduct table for k=%d: %d entries through degree %d", ssm.k, len(entries), bound)
    return CoproductTable(k=ssm.k, max_degree=bound, formal_dimension=m, basis=basis, entries=entries)


def _constants_matrix(
    n: int, basis: CohomologyBasis, base_basis: CohomologyBasis, ssm: SphereSpaceModel
) -> List[Dict[int, Any]]:
    """Rows: coordinates of c*(α) in H^n(M) for the basis classes α of H^n."""
    rows = []
    for cls in basis.basis_classes(n):
        image = ssm.constants.apply(cls.representative)
        coords = base_basis.reduce(image, degree=n).coordinates
        rows.append({i: c for i, c in enumerate(coords) if c})
    return rows


def constants_kernel(
    n: int, basis: CohomologyBasis, base_basis: CohomologyBasis, ssm: SphereSpaceModel
) -> List[CohomologyClass]:
    """Basis of ker(c*: H^n -> H^n(M))."""
    rows = _constants_matrix(n, basis, base_basis, ssm)
    kernel = left_kernel(rows, base_basis.dimension(n))
    dim = basis.dimension(n)
    return [CohomologyClass(n, [vec.get(i, QQ.zero) for i in range(dim)], basis) for vec in kernel]


def check_decomposition(
    basis: CohomologyBasis, base_basis: CohomologyBasis, ssm: SphereSpaceModel, max_degree: int
) -> List[Witness]:
    """H^n ≅ H^n(M) ⊕ ker(c*): ev* injective and c* surjective in each degree 1..max_degree."""
    witnesses = []
    for n in range(1, max_degree + 1):
        ev_rows = []
        for cls in base_basis.basis_classes(n):
            coords = basis.reduce(ssm.evaluation.apply(cls.representative), degree=n).coordinates
            ev_rows.append({i: c for i, c in enumerate(coords) if c})
        dim_base = base_basis.dimension(n)
        if rank(ev_rows, basis.dimension(n)) != dim_base:
            witnesses.append(Witness(check="decomposition", subject=f"H^{n}", residue="ev* is not injective"))
            continue
        c_rows = _constants_matrix(n, basis, base_basis, ssm)
        if rank(c_rows, dim_base) != dim_base:
            witnesses.append(Witness(check="decomposition", subject=f"H^{n}", residue="c* is not surjective"))
    return witnesses


def check_coproduct_identities(
    basis: CohomologyBasis,
    base_basis: CohomologyBasis,
    ssm: SphereSpaceModel,
    P: PoincareData,
    class_limit: int,
) -> List[Witness]:
    """δ_ns(1×α) = ev*ω·α and δ_ns(α×1) = 0 for α in ker c*, at chain level modulo coboundaries."""
    m = P.formal_dimension
    table = ssm.algebra.table
    one = GradedPolynomial.one(table)
    omega_ev = ssm.evaluation.apply(P.omega.representative)
    witnesses = []
    for n in range(1, class_limit + 1):
        for cls in basis.basis_classes(n):
            left = _coproduct_representative(one, cls.representative, ssm, P)
            difference = left - omega_ev * cls.representative
            if not basis.is_coboundary(difference, degree=n + m):
                witnesses.append(Witness(check="delta_one_alpha", subject=f"e{n}", residue=str(difference)))
        for cls in constants_kernel(n, basis, base_basis, ssm):
            value = _coproduct_representative(cls.representative, one, ssm, P)
            if not basis.is_coboundary(value, degree=n + m):
                witnesses.append(Witness(check="delta_alpha_one", subject=str(cls), residue=str(value)))
    return witnesses


def verify_vanishing(
    A: CDGA,
    k: int,
    max_degree: int = DEFAULT_MAX_DEGREE,
    model_id: Optional[str] = None,
) -> VanishingReport:
    """Check χ·ev*ω·α = 0 for a basis of H^{>0} of the sphere-space model.

    Classes α run over degrees 1..max_degree - m. Precondition failures
    produce a report marked not applicable.
    """
    model_id = model_id or A.label

    def not_applicable(reason: str, **extra: Any) -> VanishingReport:
        logger.info("Vanishing check not applicable to %s: %s", model_id, reason)
        return VanishingReport(model_id=model_id, k=k, max_degree=max_degree, applicable=False, reason=reason, **extra)

    if k < 1 or k % 2 == 0:
        return not_applicable(f"k must be odd and positive, got {k}")
    low = [g.name for g in A.table if g.degree <= k]
    if low:
        return not_applicable(f"generators of degree <= {k}: {', '.join(low)}")

    report = elliptic_report(A, k)
    chi = report.euler_characteristic
    m = report.formal_dimension
    if chi is None:
        return not_applicable("model not verifiably finite-dimensional", formal_dimension=m)

    class_limit = max_degree - m
    try:
        base = prepare_base(A)
        ssm = build_sphere_space_model(base, k)
        base_basis = cohomology(base, max(class_limit, m, 0))
        P = orientation_class(base_basis, m)
        basis = cohomology(ssm.algebra, max(class_limit, 0))
    except SullivanBraneError as e:
        return not_applicable(str(e), euler_characteristic=chi, formal_dimension=m)

    omega_ev = ssm.evaluation.apply(P.omega.representative)
    verdicts = []
    for n in range(1, class_limit + 1):
        for i, cls in enumerate(basis.basis_classes(n)):
            representative = cls.representative
            vanishes = basis.is_coboundary(omega_ev * representative, degree=n + m)
            verdicts.append(
                ClassVerdict(
                    degree=n,
                    index=i,
                    representative=str(representative),
                    product_vanishes=vanishes,
                    scaled_product_vanishes=chi == 0 or vanishes,
                )
            )

    decomposition = check_decomposition(basis, base_basis, ssm, class_limit)
    identities = check_coproduct_identities(basis, base_basis, ssm, P, class_limit)
    result = VanishingReport(
        model_id=model_id,
        k=k,
        euler_characteristic=chi,
        formal_dimension=m,
        max_degree=max_degree,
        verdicts=verdicts,
        decomposition_holds=not decomposition,
        coproduct_identities_hold=not identities,
        witnesses=decomposition + identities,
    )
    logger.info("Vanishing check for %s (k=%d): %d classes, passed=%s", model_id, k, len(verdicts), result.passed)
    return result


def compare_coproducts(
    cert: ShriekCertificate,
    table: CoproductTable,
    P: PoincareData,
    ssm: SphereSpaceModel,
    base_basis: CohomologyBasis,
    max_degree: Optional[int] = None,
) -> Tuple[bool, Dict[str, Any]]:
    """Check that id⊗φ at 1, pushed to the base, equals λ·ω.

    The λ comparison holds by construction, since the pushed value is μφ(1).
    Only the ExtLift cocycle check and δ_ns(1×1) = ev*ω can fail.

    Returns:
        Tuple of (passed, details) with λ, the reduced class and the
        table sanity check δ_ns(1×1) = ev*ω.
    """
    if cert.k != table.k or cert.k != ssm.k:
        raise DomainError("certificate, table and model use different k")
    if cert.phi.disk is not ssm.disk:
        raise DomainError("certificate was not built on this sphere-space model")
    lift = ExtLift(cert.phi, ssm.tensor)
    witness = lift.cocycle_witness(max_degree if max_degree is not None else table.max_degree)
    value = ssm.disk.projection.apply(lift.evaluate_at_unit())
    m = P.formal_dimension
    lam = cert.lambda_value
    if lam is None:
        lam = _lambda_from(cert.mu_phi_one, P, base_basis)
    reduced = base_basis.reduce(value, degree=m) if not value.is_zero() else base_basis.zero_class(m)
    expected = P.omega.scale(lam)
    passed = witness is None and reduced == expected

    details: Dict[str, Any] = {
        "lambda": str(lam),
        "extlift_at_unit": str(value),
        "reduced": str(reduced),
        "extlift_cocycle": witness is None,
    }
    unit_key = (0, 0, 0, 0)
    if unit_key in table.entries:
        basis = table.entries[unit_key].basis
        omega_ev = basis.reduce(ssm.evaluation.apply(P.omega.representative), degree=m)
        details["unit_coproduct_matches"] = table.entries[unit_key] == omega_ev
        passed = passed and details["unit_coproduct_matches"]
    return passed, details


def tau_involution(k: int, model: Union[SphereModel, DiskModel]) -> CDGAMorphism:
    """Orientation reversal on a sphere or disk model.

    For k >= 2 it negates every suspension; for k = 1 it swaps the tensor
    factors and negates the suspensions.

    Raises:
        ConsistencyError: if the map fails to commute with d or is not involutive.
    """
    if k != model.k:
        raise DomainError(f"model was built for k = {model.k}, not {k}")
    algebra = model.algebra
    table = algebra.table
    base_names = model.base.table.names if isinstance(model, SphereModel) else model.sphere.base.table.names
    r = len(base_names)
    values: Dict[int, GradedPolynomial] = {}
    for i, g in enumerate(table):
        gen = GradedPolynomial.generator(table, i)
        if g.origin == "base":
            values[i] = GradedPolynomial.generator(table, r + i) if k == 1 else gen
        elif g.origin == "tensor-copy":
            values[i] = GradedPolynomial.generator(table, i - r)
        else:
            values[i] = -gen
    tau = CDGAMorphism(algebra, algebra, values)
    if not tau.compose(tau).is_identity():
        raise ConsistencyError("orientation reversal is not an involution")
    return tau


def transport_map(phi: SLinearMap, tau: CDGAMorphism) -> SLinearMap:
    """τ*φ(ν) = (-1)^{|ν|_len} τ(φ(ν)), with |ν|_len the number of suspension factors."""
    if tau.source.table != phi.table:
        raise DomainError("τ must act on the disk model of φ")
    values = {
        mono: tau.apply(value).scale(-1 if sum(mono) % 2 else 1)
        for mono, value in phi.support().items()
    }
    return SLinearMap(phi.disk, phi.stage, phi.degree, values)


def transported_lambda(
    cert: ShriekCertificate,
    P: PoincareData,
    base_basis: CohomologyBasis,
    max_degree: Optional[int] = None,
) -> Any:
    """λ recomputed from the τ-transported cocycle.

    The transported map is checked to be a cocycle through ``max_degree``,
    by default the bound the certificate was checked through.

    Raises:
        ConsistencyError: if τ*φ is not a cocycle.
    """
    disk = cert.phi.disk
    tau = tau_involution(disk.k, disk)
    moved = transport_map(cert.phi, tau)
    if max_degree is None:
        max_degree = cert.checked_through
    if max_degree < 0:
        max_degree = shriek_check_bound(P.formal_dimension, disk.k)
    witness = moved.cocycle_witness(max_degree)
    if witness is not None:
        raise ConsistencyError(f"τ*φ is not a cocycle on {witness.subject}: residue {witness.residue}")
    S = disk.sphere.algebra
    one = moved.value(moved.table.unit()).restricted(S.table)
    return _lambda_from(disk.sphere.multiplication.apply(one), P, base_basis)


def check_representative_independence(
    ssm: SphereSpaceModel,
    basis: CohomologyBasis,
    P: PoincareData,
    trials: int = PERTURBATION_TRIALS,
    seed: int = 0,
) -> List[Witness]:
    """Perturb u and v by random coboundaries and compare δ_ns(u×v)."""
    rng = random.Random(seed)
    m = P.formal_dimension
    pairs = [
        (u, v)
        for du in range(basis.max_degree - m + 1)
        for dv in range(basis.max_degree - m - du + 1)
        for u in basis.basis_classes(du)
        for v in basis.basis_classes(dv)
    ]
    if not pairs:
        return []
    A = ssm.algebra
    table = A.table

    def perturb(poly: GradedPolynomial, degree: int) -> GradedPolynomial:
        below = basis_of_degree(degree - 1, table)
        if not below:
            return poly
        chain = GradedPolynomial(table, {mono: rng.randint(-3, 3) for mono in rng.sample(below, min(3, len(below)))})
        return poly + A.d(chain)

    witnesses = []
    for trial in range(trials):
        u, v = rng.choice(pairs)
        expected = ns_coproduct(u, v, ssm, P)
        perturbed = _coproduct_representative(
            perturb(u.representative, u.degree), perturb(v.representative, v.degree), ssm, P
        )
        found = basis.reduce(perturbed, degree=u.degree + v.degree + m)
        if found != expected:
            witnesses.append(
                Witness(
                    check="representative_independence",
                    subject=f"trial {trial}: ({u}) x ({v})",
                    residue=str(found - expected),
                )
            )
    return witnesses
