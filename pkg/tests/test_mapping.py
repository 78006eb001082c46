"""Test sphere, disk and sphere-space models."""

import pytest

from sullivan_brane.algebra import GradedPolynomial
from sullivan_brane.cdga import check_d_squared
from sullivan_brane.exceptions import IterationCapError, ModelConstructionError, StructuralError
from sullivan_brane.mapping import (
    build_disk_model,
    build_sphere_model,
    build_sphere_space_model,
    check_disk_retraction,
    prepare_base,
    suspension_name,
)


def gen(A, name):
    return GradedPolynomial.generator(A.table, name)


def test_suspension_names():
    """Test display names of suspended generators."""
    assert suspension_name("x", 1) == "s(x)"
    assert suspension_name("x", 3) == "s3(x)"
    assert suspension_name("y", 3, primed=True) == "s3(y)'"


def test_sphere_model_k1_is_tensor_square(s2):
    """Test S^0 model and σ for k = 1."""
    sphere = build_sphere_model(s2, 1)
    S = sphere.algebra
    assert S.table.names == ("x", "y", "x'", "y'")
    assert sphere.sigma["y"] == gen(S, "y'") - gen(S, "y")
    assert sphere.multiplication.apply(sphere.sigma["x"]).is_zero()


def test_sphere_model_k3(corpus):
    """Test d(s^2 y) = 2x·s^2 x for S^4."""
    base = corpus("s4")
    sphere = build_sphere_model(base, 3)
    S = sphere.algebra
    assert S.table.names == ("x", "y", "s2(x)", "s2(y)")
    assert S.table.degrees == (4, 7, 2, 5)
    assert S.differential("s2(y)") == (gen(S, "x") * gen(S, "s2(x)")).scale(2)
    assert sphere.sigma["y"] == gen(S, "s2(y)")


def test_disk_model_of_s2(s2):
    """Test d(sy) = y' - y - (x + x')·sx."""
    disk = build_disk_model(build_sphere_model(s2, 1))
    D = disk.algebra
    assert D.table.names == ("x", "y", "x'", "y'", "s(x)", "s(y)")
    x, y, xp, yp, sx = (gen(D, n) for n in ("x", "y", "x'", "y'", "s(x)"))
    assert D.differential("s(x)") == xp - x
    assert D.differential("s(y)") == yp - y - (x + xp) * sx
    assert disk.tau["y"] == -((x + xp) * sx)


def test_disk_model_k3(corpus):
    """Test d(s^3 y) = s^2 y - 2x·s^3 x for S^4."""
    disk = build_disk_model(build_sphere_model(corpus("s4"), 3))
    D = disk.algebra
    expected = gen(D, "s2(y)") - (gen(D, "x") * gen(D, "s3(x)")).scale(2)
    assert D.differential("s3(y)") == expected
    assert D.table.degrees[-2:] == (1, 4)


def test_disk_models_square_to_zero(corpus):
    """Test d^2 = 0 on every sphere, disk and sphere-space model for k in {1, 3}."""
    cases = [("s2", 1), ("cp2", 1), ("s3", 1), ("s2xs2", 1), ("s4", 3), ("hp2", 3), ("hp2", 1)]
    for name, k in cases:
        base = prepare_base(corpus(name))
        ssm = build_sphere_space_model(base, k)
        for algebra in (ssm.sphere.algebra, ssm.disk.algebra, ssm.algebra):
            ok, witness = check_d_squared(algebra)
            assert ok is True, (name, k, witness)


def test_connectivity_requirement(s2):
    """Test generators of degree <= k are rejected."""
    with pytest.raises(ModelConstructionError):
        build_sphere_model(s2, 2)


def test_iteration_cap(s2):
    """Test the (sd)-series reports the generator when it does not vanish in time."""
    with pytest.raises(IterationCapError) as exc_info:
        build_disk_model(build_sphere_model(s2, 1), iteration_cap=1)
    assert exc_info.value.generator == "y"
    assert exc_info.value.cap == 1


def test_filtration_stages(s2):
    """Test generators available at each stage."""
    disk = build_disk_model(build_sphere_model(s2, 1))
    stage = disk.stage(1)
    assert stage.sphere_generators == ["x", "x'"]
    assert stage.disk_generators == ["s(x)"]
    assert disk.stage(0).disk_generators == []
    with pytest.raises(StructuralError):
        disk.stage(3)


def test_disk_retracts_onto_base(s2, cp2):
    """Test H(D^k V) = H(∧V) in low degrees."""
    for base in (s2, cp2):
        disk = build_disk_model(build_sphere_model(base, 1))
        ok, reason = check_disk_retraction(disk, 6)
        assert ok is True, reason


def test_sphere_space_model_maps(cp2):
    """Test constants ∘ evaluation is the identity."""
    ssm = build_sphere_space_model(prepare_base(cp2), 1)
    assert ssm.constants.compose(ssm.evaluation).is_identity()
    assert ssm.tensor.right_generators == ["s(x)'", "s(y)'"]
    assert ssm.algebra.table.names[-2:] == ("s(x)'", "s(y)'")
