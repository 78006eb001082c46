"""Command handlers and report rendering.

Each handler takes a CDGA, its spec and the command flags and returns a
dictionary with ``success``, ``results``, ``witnesses`` and ``error``.
"""

import json
import logging
from typing import Any, Callable, Dict, List, Optional, Tuple

from sullivan_brane.bounds import shriek_check_bound
from sullivan_brane.cache import ReportCache, cache_key
from sullivan_brane.cdga import CDGA, check_d_squared
from sullivan_brane.coproduct import (
    check_representative_independence,
    compare_coproducts,
    coproduct_table,
    transported_lambda,
    verify_vanishing,
)
from sullivan_brane.exceptions import (
    DegreeBoundError,
    DomainError,
    ModelParseError,
    PoincareDualityError,
    SullivanBraneError,
)
from sullivan_brane.homology import (
    check_poincare_duality,
    cohomology,
    diagonal_class,
    elliptic_report,
    orientation_class,
    require_pure_elliptic,
)
from sullivan_brane.mapping import build_disk_model, build_sphere_model, build_sphere_space_model, prepare_base
from sullivan_brane.models import (
    DEFAULT_MAX_DEGREE,
    EXIT_FAILURE,
    EXIT_PASS,
    EXIT_USAGE,
    CommandFlags,
    ModelSpec,
    Report,
    Witness,
)
from sullivan_brane.parser import build_cdga, content_hash
from sullivan_brane.shriek import (
    build_phi,
    check_evenpart_identity,
    check_oddpart_identities,
    check_partial_derivatives,
    jacobian_determinant,
)

logger = logging.getLogger(__name__)

# Errors about the input or the flags rather than the mathematics
USAGE_ERRORS = (ModelParseError, DegreeBoundError, DomainError)

Handler = Callable[[CDGA, ModelSpec, CommandFlags], Dict[str, Any]]


def _failure(error: str, witnesses: Optional[List[Witness]] = None, **results: Any) -> Dict[str, Any]:
    return {"success": False, "results": results, "witnesses": witnesses or [], "error": error}


def _success(success: bool, results: Dict[str, Any], witnesses: Optional[List[Witness]] = None) -> Dict[str, Any]:
    return {"success": success, "results": results, "witnesses": witnesses or [], "error": None}


def _formal_dimension(A: CDGA) -> int:
    evens = [A.table.degrees[i] for i in A.even_indices]
    odds = [A.table.degrees[i] for i in A.odd_indices]
    return sum(odds) + sum(1 - a for a in evens)


def validate(A: CDGA, spec: ModelSpec, flags: CommandFlags) -> Dict[str, Any]:
    """Check d² = 0, purity, ellipticity and the expected values of the spec.

    Args:
        A: Model to validate
        spec: Parsed spec, for its expected values
        flags: Command flags; k selects the loop-dimension formula

    Returns:
        Dictionary with success status, results and witnesses
    """
    ok, witness = check_d_squared(A)
    if not ok:
        return _failure(
            f"d^2 != 0 on generator {witness.subject}",
            [witness],
            d_squared_zero=False,
            pure=A.is_pure(),
        )

    report = elliptic_report(A, flags.k)
    witnesses = []
    expected = spec.expected
    if expected.euler is not None and expected.euler != report.euler_characteristic:
        witnesses.append(
            Witness(check="expected_euler", subject=spec.name, residue=f"{report.euler_characteristic} != {expected.euler}")
        )
    if expected.formal_dimension is not None and expected.formal_dimension != report.formal_dimension:
        witnesses.append(
            Witness(
                check="expected_formal_dimension",
                subject=spec.name,
                residue=f"{report.formal_dimension} != {expected.formal_dimension}",
            )
        )
    dimensions = None
    if expected.cohomology is not None:
        dimensions = cohomology(A, len(expected.cohomology) - 1).dimensions()
        for n, (found, wanted) in enumerate(zip(dimensions, expected.cohomology)):
            if found != wanted:
                witnesses.append(Witness(check="expected_cohomology", subject=f"H^{n}", residue=f"{found} != {wanted}"))

    results = {
        "d_squared_zero": True,
        "pure": report.pure,
        "elliptic": report.model_dump(),
    }
    if dimensions is not None:
        results["cohomology"] = dimensions
    return _success(not witnesses, results, witnesses)


def cohomology_dimensions(A: CDGA, spec: ModelSpec, flags: CommandFlags) -> Dict[str, Any]:
    """Dimensions and basis representatives of H^n for n up to the bound."""
    bound = flags.max_degree if flags.max_degree is not None else DEFAULT_MAX_DEGREE
    basis = cohomology(A, bound)
    representatives = {
        str(n): [str(c.representative) for c in basis.basis_classes(n)]
        for n in range(bound + 1)
        if basis.dimension(n)
    }
    return _success(True, {"max_degree": bound, "dimensions": basis.dimensions(), "basis": representatives})


def euler(A: CDGA, spec: ModelSpec, flags: CommandFlags) -> Dict[str, Any]:
    """Euler characteristic, formal dimension and the χ ≠ 0 criterion."""
    report = elliptic_report(A, flags.k)
    results = {
        "euler_characteristic": report.euler_characteristic,
        "formal_dimension": report.formal_dimension,
        "loop_dimension": report.loop_dimension,
        "p": report.p,
        "q": report.q,
        "criterion_holds": report.euler_nonzero_iff_balanced,
        "notes": report.notes,
    }
    if report.euler_characteristic is None:
        witness = Witness(check="finiteness", subject=spec.name, residue=report.notes[0])
        return _failure("model not verifiably finite-dimensional", [witness], **results)
    return _success(True, results)


def diagonal(A: CDGA, spec: ModelSpec, flags: CommandFlags) -> Dict[str, Any]:
    """Diagonal class of the Poincaré duality algebra and its μ-pullback."""
    m = _formal_dimension(A)
    basis = cohomology(A, max(m, 0))
    P = orientation_class(basis, m)
    ok, reason = check_poincare_duality(basis, P)
    if not ok:
        return _failure(reason, [Witness(check="poincare_duality", subject=spec.name, residue=reason)])
    D = diagonal_class(basis, P)
    return _success(
        True,
        {
            "formal_dimension": m,
            "orientation_class": str(P.omega.representative),
            "diagonal_class": str(D.representative),
            "pullback": f"{D.euler_characteristic}*omega",
            "euler_characteristic": D.euler_characteristic,
        },
    )


def jacobian(A: CDGA, spec: ModelSpec, flags: CommandFlags) -> Dict[str, Any]:
    """det(∂(dy_j)/∂x_i), its class λ·ω and the comparison λ = χ."""
    report = elliptic_report(A, flags.k)
    require_pure_elliptic(report)
    det = jacobian_determinant(A)
    m = report.formal_dimension
    basis = cohomology(A, max(m, 0))
    P = orientation_class(basis, m)
    lam = P.pairing(basis.reduce(det, degree=m))
    chi = report.euler_characteristic
    results = {
        "determinant": str(det),
        "lambda": str(lam),
        "class": f"{lam}*omega",
        "orientation_class": str(P.omega.representative),
        "euler_characteristic": chi,
        "matches_euler": chi is not None and lam == chi,
    }
    if not results["matches_euler"]:
        witness = Witness(check="jacobian_class", subject=str(det), residue=f"lambda = {lam}, chi = {chi}")
        return _failure("class of the Jacobian is not χ·ω", [witness], **results)
    return _success(True, results)


def shriek(A: CDGA, spec: ModelSpec, flags: CommandFlags) -> Dict[str, Any]:
    """Build the shriek cocycle φ and check the identities it satisfies."""
    base = prepare_base(A)
    k = flags.k
    disk = build_disk_model(build_sphere_model(base, k))
    m = _formal_dimension(base)
    bound = flags.max_degree if flags.max_degree is not None else shriek_check_bound(m, k)
    cert = build_phi(disk, max_degree=bound)

    witnesses: List[Witness] = []
    notes = list(cert.notes)
    results: Dict[str, Any] = {
        "k": k,
        "p": cert.p,
        "q": cert.q,
        "degree": cert.degree,
        "checked_through": cert.checked_through,
        "stages": [
            {"t": t, "degree": stage.degree, "nonzero_values": len(stage.support())}
            for t, stage in enumerate(cert.stages)
        ],
        "mu_phi_one": str(cert.mu_phi_one),
    }

    if cert.top_matches is not None:
        results["top_value"] = str(cert.top_value)
        results["sigma_top"] = str(cert.sigma_top)
        results["top_matches"] = cert.top_matches
        results["nontrivial"] = cert.nontrivial
        if not cert.top_matches:
            witnesses.append(
                Witness(check="top_value", subject="phi(s^k x_[p])", residue=f"{cert.raw_top_value} != {cert.sigma_top}")
            )
        if not cert.nontrivial:
            witnesses.append(Witness(check="nontriviality", subject="phi(s^k x_[p])", residue=str(cert.top_value)))
        witnesses.extend(check_partial_derivatives(disk))
        witnesses.extend(check_evenpart_identity(cert, disk))
        witnesses.extend(check_oddpart_identities(cert, disk))

    if cert.jacobian_matches is not None:
        results["jacobian"] = str(cert.jacobian) if cert.jacobian is not None else None
        results["jacobian_matches"] = cert.jacobian_matches
        if not cert.jacobian_matches:
            witnesses.append(Witness(check="jacobian", subject="mu(phi(1))", residue=str(cert.mu_phi_one)))

    if cert.lambda_value is not None:
        report = elliptic_report(base, k)
        chi = report.euler_characteristic
        results["lambda"] = str(cert.lambda_value)
        results["euler_characteristic"] = chi
        results["lambda_equals_euler"] = chi is not None and cert.lambda_value == chi
        if not results["lambda_equals_euler"]:
            witnesses.append(Witness(check="lambda", subject=spec.name, residue=f"lambda = {cert.lambda_value}, chi = {chi}"))
        try:
            base_basis = cohomology(base, max(m, 0))
            moved = transported_lambda(cert, orientation_class(base_basis, m), base_basis)
            results["transported_lambda"] = str(moved)
            if moved != cert.lambda_value:
                witnesses.append(
                    Witness(check="orientation_reversal", subject=spec.name, residue=f"{moved} != {cert.lambda_value}")
                )
        except PoincareDualityError as e:
            notes.append(f"orientation reversal not checked: {e}")

    results["notes"] = notes
    return _success(not witnesses, results, witnesses)


def vanishing(A: CDGA, spec: ModelSpec, flags: CommandFlags) -> Dict[str, Any]:
    """χ·ev*ω·α = 0 for every basis class α of positive degree."""
    bound = flags.max_degree if flags.max_degree is not None else DEFAULT_MAX_DEGREE
    report = verify_vanishing(A, flags.k, bound, model_id=spec.name)
    results = report.model_dump()
    if not report.applicable:
        return {
            "success": False,
            "results": results,
            "witnesses": [],
            "error": f"vanishing check not applicable: {report.reason}",
            "usage": True,
        }
    witnesses = list(report.witnesses)
    for verdict in report.verdicts:
        if not verdict.scaled_product_vanishes:
            witnesses.append(
                Witness(check="vanishing", subject=f"e{verdict.degree}_{verdict.index}", residue=verdict.representative)
            )
    return _success(report.passed, results, witnesses)


def compare(A: CDGA, spec: ModelSpec, flags: CommandFlags) -> Dict[str, Any]:
    """Compare the shriek side with the closed coproduct formula."""
    k = flags.k
    base = prepare_base(A)
    m = _formal_dimension(base)
    bound = flags.max_degree if flags.max_degree is not None else max(m, 0) + 2 * k
    ssm = build_sphere_space_model(base, k)
    cert = build_phi(ssm.disk, max_degree=shriek_check_bound(m, k))
    base_basis = cohomology(base, max(m, 0))
    P = orientation_class(base_basis, m)
    basis = cohomology(ssm.algebra, bound)
    table = coproduct_table(ssm, basis, P, bound)
    passed, details = compare_coproducts(cert, table, P, ssm, base_basis, bound)
    witnesses = check_representative_independence(ssm, basis, P)
    if not passed:
        witnesses.insert(0, Witness(check="compare", subject=spec.name, residue=details["reduced"]))
    results = {"k": k, "max_degree": bound, "coproduct_entries": len(table.entries), **details}
    results["representative_independent"] = not any(w.check == "representative_independence" for w in witnesses)
    return _success(not witnesses, results, witnesses)


COMMAND_HANDLERS: Dict[str, Handler] = {
    "validate": validate,
    "cohomology": cohomology_dimensions,
    "euler": euler,
    "diagonal-class": diagonal,
    "jacobian": jacobian,
    "shriek": shriek,
    "vanishing": vanishing,
    "compare": compare,
}


def _plain(value: Any) -> Any:
    """JSON-native copy of a result, so fresh and cached reports render alike."""
    return json.loads(json.dumps(value, default=str))


def _execute(command: str, spec: ModelSpec, flags: CommandFlags) -> Tuple[Dict[str, Any], int]:
    try:
        A = build_cdga(spec)
        if command != "validate":
            ok, witness = check_d_squared(A)
            if not ok:
                return _failure(f"d^2 != 0 on generator {witness.subject}", [witness]), EXIT_FAILURE
        outcome = COMMAND_HANDLERS[command](A, spec, flags)
    except USAGE_ERRORS as e:
        logger.info("%s on %s: usage error: %s", command, spec.name, e)
        return _failure(str(e)), EXIT_USAGE
    except SullivanBraneError as e:
        logger.info("%s on %s failed: %s", command, spec.name, e)
        return _failure(str(e)), EXIT_FAILURE

    if outcome.pop("usage", False):
        return outcome, EXIT_USAGE
    return outcome, EXIT_PASS if outcome["success"] else EXIT_FAILURE


def run_command(
    command: str,
    spec: ModelSpec,
    flags: Optional[CommandFlags] = None,
    cache: Optional[ReportCache] = None,
) -> Tuple[Report, int]:
    """Run a command on a parsed model.

    Args:
        command: One of COMMANDS
        spec: Parsed model
        flags: Degree bound and k
        cache: Report cache; None disables caching

    Returns:
        Tuple of (report, exit code)

    Raises:
        ValueError: If the command is unknown
    """
    if command not in COMMAND_HANDLERS:
        raise ValueError(f"Unknown command '{command}'")
    flags = flags or CommandFlags()
    digest = content_hash(spec)
    key = cache_key(digest, command, flags.model_dump())

    if cache is not None:
        cached = cache.load(key)
        if cached is not None:
            return cached, cached.exit_code

    outcome, code = _execute(command, spec, flags)
    report = Report(
        command=command,
        model_id=spec.name,
        content_hash=digest,
        flags=flags,
        success=outcome["success"],
        exit_code=code,
        results=_plain(outcome["results"]),
        witnesses=outcome["witnesses"],
        error=outcome["error"],
    )
    if cache is not None and code != EXIT_USAGE:
        cache.store(key, report)
    return report, code


def _render_value(key: str, value: Any, indent: int, lines: List[str]) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        lines.append(f"{pad}{key}:")
        for k, v in value.items():
            _render_value(str(k), v, indent + 1, lines)
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        lines.append(f"{pad}{key}:")
        for i, v in enumerate(value):
            _render_value(f"[{i}]", v, indent + 1, lines)
    elif isinstance(value, list):
        lines.append(f"{pad}{key}: {' '.join(str(v) for v in value) if value else '-'}")
    elif value is None:
        lines.append(f"{pad}{key}: -")
    else:
        lines.append(f"{pad}{key}: {value}")


def render_report(report: Report, fmt: str = "human") -> str:
    """Render a report as stable-ordered text or as JSON.

    Args:
        report: Report to render
        fmt: "human" or "structured"

    Returns:
        Rendered report ending in a newline
    """
    if fmt == "structured":
        return report.model_dump_json(indent=2) + "\n"
    if fmt != "human":
        raise ValueError(f"Unknown report format '{fmt}'")

    lines = [
        f"command: {report.command}",
        f"model: {report.model_id} ({report.content_hash[:12]})",
        f"flags: max_degree={report.flags.max_degree if report.flags.max_degree is not None else 'default'} k={report.flags.k}",
        f"status: {'PASS' if report.success else 'FAIL'} (exit {report.exit_code})",
    ]
    if report.error:
        lines.append(f"error: {report.error}")
    if report.results:
        lines.append("results:")
        for key, value in report.results.items():
            _render_value(key, value, 1, lines)
    if report.witnesses:
        lines.append("witnesses:")
        for w in report.witnesses:
            lines.append(f"  {w.check} on {w.subject}: {w.residue}")
    lines.append(f"tool: sullivan-brane {report.tool_version} (schema {report.schema_version})")
    return "\n".join(lines) + "\n"
