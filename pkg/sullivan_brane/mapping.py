"""Models of the sphere, disk and free sphere spaces of a Sullivan algebra.

For a base (∧V, d) and k >= 1 this module builds

- the sphere model S^{k-1}V: for k = 1 the tensor square, for k >= 2 the
  algebra ∧V ⊗ ∧s^{k-1}V with d(s^{k-1}v) = (-1)^{k-1} s^{k-1}(dv);
- the disk model D^kV over it, with d(s^k v) = σv + τv;
- the relative tensor product D^kV ⊗_{S^{k-1}V} D^kV, a model of the free
  sphere space Map(S^k, M), with its evaluation and constants maps.
"""

import logging
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field
from sympy import QQ

from sullivan_brane.algebra import GradedPolynomial, substitute
from sullivan_brane.cdga import CDGA, CDGAMorphism, Derivation, check_d_squared, tensor
from sullivan_brane.exceptions import (
    ConsistencyError,
    IterationCapError,
    ModelConstructionError,
    StructuralError,
)
from sullivan_brane.models import ITERATION_CAP, Generator

logger = logging.getLogger(__name__)


def suspension_name(name: str, shift: int, primed: bool = False) -> str:
    """Display name of s^shift(name), e.g. ``s(x)`` or ``s3(x)'``."""
    body = f"s({name})" if shift == 1 else f"s{shift}({name})"
    return body + "'" if primed else body


class SphereModel(BaseModel):
    """Model S^{k-1}V of Map(S^{k-1}, M)."""

    k: int = Field(..., ge=1)
    base: Any
    algebra: Any
    sigma: Dict[str, Any]
    suspension: Optional[Any] = None
    multiplication: Any

    model_config = {"frozen": True, "arbitrary_types_allowed": True}


class FilteredStage(BaseModel):
    """Generators available at stage t of the Sullivan filtration."""

    t: int = Field(..., ge=0)
    sphere_generators: List[str]
    disk_generators: List[str]

    model_config = {"frozen": True}


class DiskModel(BaseModel):
    """Relative Sullivan algebra D^kV over S^{k-1}V with d(s^k v) = σv + τv."""

    k: int = Field(..., ge=1)
    sphere: SphereModel
    algebra: Any
    sigma: Dict[str, Any]
    tau: Dict[str, Any]
    suspension: Any
    projection: Any

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @property
    def base(self) -> CDGA:
        return self.sphere.base

    @property
    def sphere_size(self) -> int:
        return len(self.sphere.algebra.table)

    @property
    def stage_names(self) -> List[str]:
        return list(self.sphere.base.table.names)

    def suspension_index(self, name: str) -> int:
        """Index in the disk table of s^k(name)."""
        return self.sphere_size + self.sphere.base.table.index(name)

    def stage(self, t: int) -> FilteredStage:
        names = self.stage_names
        if not 0 <= t <= len(names):
            raise StructuralError(f"Stage {t} out of range 0..{len(names)}")
        table = self.algebra.table
        r = len(names)
        sphere = list(names[:t]) + [table.names[r + i] for i in range(t)]
        disk = [table.names[self.sphere_size + i] for i in range(t)]
        return FilteredStage(t=t, sphere_generators=sphere, disk_generators=disk)


class RelativeTensor(BaseModel):
    """left ⊗_S right, presented as a CDGA on left's generators plus primed suspensions."""

    algebra: Any
    left: Any
    sphere: SphereModel
    right: DiskModel
    left_inclusion: Any
    right_map: Any
    left_size: int
    right_generators: List[str]

    model_config = {"frozen": True, "arbitrary_types_allowed": True}


class SphereSpaceModel(BaseModel):
    """Model of Map(S^k, M) with its evaluation and constants maps."""

    k: int = Field(..., ge=1)
    base: Any
    sphere: SphereModel
    disk: DiskModel
    tensor: RelativeTensor
    algebra: Any
    evaluation: Any
    constants: Any

    model_config = {"frozen": True, "arbitrary_types_allowed": True}


def _require_connectivity(base: CDGA, k: int) -> None:
    low = [f"{g.name} (degree {g.degree})" for g in base.table if g.degree <= k]
    if low:
        raise ModelConstructionError(
            f"Generators of degree <= {k} are not allowed for k = {k}: {', '.join(low)}"
        )


def collapse_morphism(A: CDGA, base: CDGA, validate: bool = True) -> CDGAMorphism:
    """Map onto the base: base generators to themselves, tensor copies to their source, suspensions to 0.

    On the sphere model this is μ (multiplication for k = 1); on disk and
    sphere-space models it is the constants projection c*.
    """
    values: Dict[int, GradedPolynomial] = {}
    for i, g in enumerate(A.table):
        if g.origin == "base":
            values[i] = base.generator(g.name)
        elif g.origin == "tensor-copy":
            values[i] = base.generator(g.base_name)
        else:
            values[i] = base.zero()
    return CDGAMorphism(A, base, values, validate=validate)


def build_sphere_model(base: CDGA, k: int) -> SphereModel:
    """Model of Map(S^{k-1}, M).

    Args:
        base: The Sullivan algebra (∧V, d)
        k: Sphere dimension of the mapping space built on top, k >= 1

    Returns:
        SphereModel with σv = 1⊗v - v⊗1 (k = 1) or σv = s^{k-1}v (k >= 2)
    """
    if k < 1:
        raise ModelConstructionError(f"k must be positive, got {k}")
    _require_connectivity(base, k)
    names = base.table.names

    if k == 1:
        algebra = tensor(base, base, label=f"S0({base.label})")
        r = len(names)
        sigma = {
            v: algebra.generator(r + i) - algebra.generator(i) for i, v in enumerate(names)
        }
        multiplication = collapse_morphism(algebra, base)
        logger.info("Built sphere model S^0 of %s with %d generators", base.label, len(algebra.table))
        return SphereModel(
            k=k, base=base, algebra=algebra, sigma=sigma, suspension=None, multiplication=multiplication
        )

    shift = k - 1
    suspended = [
        Generator(
            name=suspension_name(g.name, shift),
            degree=g.degree - shift,
            origin="suspended",
            shift=shift,
            source=g.name,
        )
        for g in base.table
    ]
    table = base.table.extend(suspended)
    r = len(names)
    s = Derivation(table, -shift, {v: GradedPolynomial.generator(table, r + i) for i, v in enumerate(names)})
    sign = -1 if shift % 2 else 1

    differential: Dict[int, GradedPolynomial] = {}
    for i in range(r):
        dv = base.differential(i).extended(table)
        differential[i] = dv
        differential[r + i] = s.apply(dv).scale(sign)
    algebra = CDGA(table, differential, label=f"S{shift}({base.label})")
    ok, witness = check_d_squared(algebra)
    if not ok:
        raise ModelConstructionError(f"Sphere model has d^2 != 0 on {witness.subject}: {witness.residue}")

    sigma = {v: algebra.generator(r + i) for i, v in enumerate(names)}
    multiplication = collapse_morphism(algebra, base)
    logger.info("Built sphere model S^%d of %s with %d generators", shift, base.label, len(table))
    return SphereModel(
        k=k, base=base, algebra=algebra, sigma=sigma, suspension=s, multiplication=multiplication
    )


def _loop_series(
    start: GradedPolynomial,
    s: Derivation,
    partial: Derivation,
    generator: str,
    cap: int,
) -> GradedPolynomial:
    """Σ_{n>=1} (sd)^n/n! applied to ``start``, iterated until a term vanishes."""
    total = GradedPolynomial.zero(start.table)
    term = start
    for n in range(1, cap + 1):
        term = s.apply(partial.apply(term)).scale(QQ(1, n))
        if term.is_zero():
            logger.debug("(sd)-series for %s vanished after %d steps", generator, n)
            return total
        total = total + term
    raise IterationCapError(generator, cap)


def build_disk_model(sphere: SphereModel, iteration_cap: int = ITERATION_CAP) -> DiskModel:
    """Model D^kV of Map(D^k, M), built stage by stage along the base filtration.

    Raises:
        ModelConstructionError: if the base is not filtered in its given
            order, τ(z_t) leaves D^k(t-1), or d^2 != 0.
        IterationCapError: if the k = 1 series does not terminate.
    """
    base = sphere.base
    k = sphere.k
    violation = base.filtration_violation()
    if violation:
        raise ModelConstructionError(f"Base is not a Sullivan algebra in its given order: {violation}")

    S = sphere.algebra
    n_s = len(S.table)
    names = base.table.names
    r = len(names)
    disk_generators = [
        Generator(
            name=suspension_name(g.name, k),
            degree=g.degree - k,
            origin="disk",
            shift=k,
            source=g.name,
        )
        for g in base.table
    ]
    table = S.table.extend(disk_generators)

    if k == 1:
        s_values: Dict[int, GradedPolynomial] = {}
        for i in range(r):
            gen = GradedPolynomial.generator(table, n_s + i)
            s_values[i] = gen
            s_values[r + i] = gen
        s = Derivation(table, -1, s_values)
    else:
        s = Derivation(table, -k, {i: GradedPolynomial.generator(table, n_s + i) for i in range(r)})

    differential: Dict[int, GradedPolynomial] = {
        i: S.differential(i).extended(table) for i in range(n_s)
    }
    sigma = {v: sphere.sigma[v].extended(table) for v in names}
    tau: Dict[str, GradedPolynomial] = {}
    sign = -1 if k % 2 else 1

    for t, v in enumerate(names):
        if k == 1:
            partial = Derivation(table, 1, differential)
            tau_v = -_loop_series(GradedPolynomial.generator(table, t), s, partial, v, iteration_cap)
        else:
            tau_v = s.apply(base.differential(t).extended(table)).scale(sign)
        late = [table.names[j] for j in tau_v.used_generators() if j >= n_s + t]
        if late:
            raise ModelConstructionError(
                f"τ({v}) = {tau_v} uses {', '.join(late)}, outside the previous stage"
            )
        tau[v] = tau_v
        differential[n_s + t] = sigma[v] + tau_v
        logger.debug("d(%s) = %s", table.names[n_s + t], differential[n_s + t])

    algebra = CDGA(table, differential, label=f"D{k}({base.label})")
    ok, witness = check_d_squared(algebra)
    if not ok:
        raise ModelConstructionError(f"Disk model has d^2 != 0 on {witness.subject}: {witness.residue}")

    projection = collapse_morphism(algebra, base)
    logger.info("Built disk model D^%d of %s with %d generators", k, base.label, len(table))
    return DiskModel(
        k=k,
        sphere=sphere,
        algebra=algebra,
        sigma=sigma,
        tau=tau,
        suspension=s,
        projection=projection,
    )


def check_disk_retraction(disk: DiskModel, max_degree: int) -> Tuple[bool, Optional[str]]:
    """Check dim H^n(D^kV) = dim H^n(∧V) for n <= max_degree.

    Returns:
        Tuple of (passed, first mismatch description)
    """
    from sullivan_brane.homology import cohomology

    disk_dims = cohomology(disk.algebra, max_degree).dimensions()
    base_dims = cohomology(disk.base, max_degree).dimensions()
    for n, (a, b) in enumerate(zip(disk_dims, base_dims)):
        if a != b:
            return False, f"dim H^{n}: disk model {a}, base {b}"
    return True, None


def relative_tensor(left: CDGA, sphere: SphereModel, right: DiskModel) -> RelativeTensor:
    """left ⊗_S right for an S-algebra ``left`` whose table starts with S's generators.

    The right factor contributes its suspension generators, primed; their
    differentials are the disk differentials read in the tensor product.
    """
    S = sphere.algebra
    if not S.table.is_prefix_of(left.table):
        raise StructuralError(f"{left.label} is not presented as an algebra over {S.label}")
    if right.sphere.algebra.table != S.table:
        raise StructuralError(f"{right.algebra.label} is not an algebra over {S.label}")

    n_left = len(left.table)
    n_s = len(S.table)
    taken = set(left.table.names)
    primed = []
    for g in right.algebra.table.generators[n_s:]:
        name = g.name + "'"
        while name in taken:
            name += "'"
        taken.add(name)
        primed.append(g.model_copy(update={"name": name, "primed": True}))
    table = left.table.extend(primed)

    images = [GradedPolynomial.generator(table, i) for i in range(n_s)]
    images += [GradedPolynomial.generator(table, n_left + j) for j in range(len(primed))]
    differential: Dict[int, GradedPolynomial] = {
        i: left.differential(i).extended(table) for i in range(n_left)
    }
    for j in range(len(primed)):
        differential[n_left + j] = substitute(right.algebra.differential(n_s + j), table, images)

    algebra = CDGA(table, differential, label=f"{left.label}⊗_{S.label}{right.algebra.label}")
    ok, witness = check_d_squared(algebra)
    if not ok:
        raise ModelConstructionError(f"Relative tensor has d^2 != 0 on {witness.subject}: {witness.residue}")

    left_inclusion = CDGAMorphism(
        left, algebra, {i: GradedPolynomial.generator(table, i) for i in range(n_left)}
    )
    right_map = CDGAMorphism(right.algebra, algebra, dict(enumerate(images)))
    return RelativeTensor(
        algebra=algebra,
        left=left,
        sphere=sphere,
        right=right,
        left_inclusion=left_inclusion,
        right_map=right_map,
        left_size=n_left,
        right_generators=[g.name for g in primed],
    )


def prepare_base(base: CDGA) -> CDGA:
    """Pure models are presented evens-first; others keep their order."""
    if base.is_pure():
        return base.evens_first()
    return base


def build_sphere_space_model(base: CDGA, k: int, iteration_cap: int = ITERATION_CAP) -> SphereSpaceModel:
    """Model of Map(S^k, M) as D^kV ⊗_{S^{k-1}V} D^kV.

    Raises:
        ConsistencyError: if constants ∘ evaluation is not the identity.
    """
    sphere = build_sphere_model(base, k)
    disk = build_disk_model(sphere, iteration_cap=iteration_cap)
    rt = relative_tensor(disk.algebra, sphere, disk)
    table = rt.algebra.table
    evaluation = CDGAMorphism(
        base, rt.algebra, {name: GradedPolynomial.generator(table, name) for name in base.table.names}
    )
    constants = collapse_morphism(rt.algebra, base)
    if not constants.compose(evaluation).is_identity():
        raise ConsistencyError("constants ∘ evaluation is not the identity on the base")
    logger.info("Built sphere-space model for k=%d with %d generators", k, len(table))
    return SphereSpaceModel(
        k=k,
        base=base,
        sphere=sphere,
        disk=disk,
        tensor=rt,
        algebra=rt.algebra,
        evaluation=evaluation,
        constants=constants,
    )
