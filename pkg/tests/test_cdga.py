"""Test derivations, CDGAs and their morphisms."""

import random

import pytest

from sullivan_brane.algebra import GeneratorTable, GradedPolynomial, basis_of_degree
from sullivan_brane.cdga import (
    CDGA,
    CDGAMorphism,
    check_d_squared,
    partial_derivative,
    tensor,
)
from sullivan_brane.exceptions import (
    ConsistencyError,
    DomainError,
    ModelConstructionError,
    StructuralError,
)
from sullivan_brane.mapping import build_disk_model, build_sphere_model, prepare_base
from sullivan_brane.models import Generator


def test_leibniz_rule(s2):
    """Test d(x·y) = x·dy = x^3."""
    x, y = s2.generator("x"), s2.generator("y")
    assert s2.d(x * y) == x ** 3
    assert s2.d(y * x) == x ** 3


def random_element(rng, table, degree):
    """Random integer combination of up to three monomials of one degree."""
    basis = basis_of_degree(degree, table)
    chosen = rng.sample(basis, min(3, len(basis)))
    return GradedPolynomial(table, {mono: rng.randint(-3, 3) for mono in chosen})


@pytest.mark.parametrize("name", ["s2", "cp2", "s3xs3"])
def test_leibniz_rule_on_random_elements(corpus, name):
    """Test d(ab) = da·b + (-1)^{|a|} a·db on the disk model up to degree 16."""
    D = build_disk_model(build_sphere_model(prepare_base(corpus(name)), 1)).algebra
    rng = random.Random(3)
    for _ in range(40):
        p = rng.randint(0, 8)
        q = rng.randint(0, 16 - p)
        a = random_element(rng, D.table, p)
        b = random_element(rng, D.table, q)
        sign = -1 if p % 2 else 1
        assert D.d(a * b) == D.d(a) * b + (a * D.d(b)).scale(sign), (str(a), str(b))


def test_koszul_rule_on_odd_product(make_model):
    """Test d(y·z) = dy·z - y·dz."""
    A = make_model("name: t\ngenerators:\n  x : 2\n  y : 3\n  z : 5\ndifferential:\n  d y = x^2\n  d z = x^3\n")
    x, y, z = (A.generator(n) for n in ("x", "y", "z"))
    assert A.d(y * z) == x ** 2 * z - y * x ** 3


def test_d_squared_on_corpus(corpus):
    """Test d^2 = 0 on the valid bundled models."""
    for name in ("s2", "s3", "cp2", "hp2", "s2xs2", "s4", "s3xs3"):
        ok, witness = check_d_squared(corpus(name), max_degree=8)
        assert ok is True, name
        assert witness is None


def test_d_squared_witness(corpus):
    """Test the broken model reports the failing generator."""
    ok, witness = check_d_squared(corpus("broken_dsquared"))
    assert ok is False
    assert witness.subject == "z"
    assert witness.residue == "x^3"


def test_corrupted_differential_is_caught():
    """Test d y = x^2 + y is rejected as inhomogeneous, and caught by the d^2 check when forced."""
    table = GeneratorTable([Generator(name="x", degree=2), Generator(name="y", degree=3)])
    x, y = GradedPolynomial.generator(table, "x"), GradedPolynomial.generator(table, "y")
    with pytest.raises(StructuralError):
        CDGA(table, {"y": x * x + y})

    forced = CDGA(table, {"y": x * x + y}, validate=False)
    ok, witness = check_d_squared(forced)
    assert ok is False
    assert witness.subject == "y"


def test_purity(corpus):
    """Test purity of bundled models."""
    assert corpus("s2").is_pure()
    assert corpus("s3xs3").is_pure()
    assert not corpus("broken_dsquared").is_pure()


def test_evens_first(corpus):
    """Test the evens-first presentation of S^2 x S^2."""
    A = corpus("s2xs2").evens_first()
    assert A.table.names == ("x1", "x2", "y1", "y2")
    assert A.differential("y2") == A.generator("x2") ** 2


def test_reorder_violating_filtration(s2):
    """Test putting y before x breaks the Sullivan condition."""
    with pytest.raises(ModelConstructionError):
        s2.reordered(["y", "x"])


def test_partial_derivative(cp2):
    """Test ∂(x^3)/∂x = 3x^2."""
    x = cp2.generator("x")
    assert partial_derivative(x ** 3, "x") == (x ** 2).scale(3)


def test_partial_derivative_along_odd_generator(cp2):
    """Test partial derivatives are only defined along even generators."""
    with pytest.raises(DomainError):
        partial_derivative(cp2.generator("x"), "y")


def test_tensor_square(s2):
    """Test the tensor square gets primed copies."""
    T = tensor(s2, s2)
    assert T.table.names == ("x", "y", "x'", "y'")
    assert T.table[2].origin == "tensor-copy"
    assert T.table[2].source == "x"
    assert T.differential("y'") == T.generator("x'") ** 2
    ok, _ = check_d_squared(T)
    assert ok is True


def test_morphism_must_commute_with_d(s2):
    """Test y -> 0 is not a chain map."""
    with pytest.raises(ConsistencyError):
        CDGAMorphism(s2, s2, {"x": s2.generator("x"), "y": s2.zero()})


def test_morphism_requires_every_image(s2):
    """Test missing generator images are rejected."""
    with pytest.raises(StructuralError):
        CDGAMorphism(s2, s2, {"x": s2.generator("x")})


def test_identity_morphism(s2):
    """Test identity, composition and application."""
    identity = CDGAMorphism(s2, s2, {"x": s2.generator("x"), "y": s2.generator("y")})
    assert identity.is_identity()
    assert identity.compose(identity).is_identity()
    x, y = s2.generator("x"), s2.generator("y")
    assert identity.apply(x * y) == x * y


def test_doubling_morphism(s2):
    """Test x -> 2x, y -> 4y is a chain map."""
    doubled = CDGAMorphism(s2, s2, {"x": s2.generator("x").scale(2), "y": s2.generator("y").scale(4)})
    ok, witness = doubled.check_chain_map()
    assert ok is True
    assert witness is None
    assert not doubled.is_identity()
