"""Test graded polynomials over generator tables."""

import random

import pytest
from sympy import QQ, Rational

from sullivan_brane.algebra import (
    GeneratorTable,
    GradedPolynomial,
    basis_of_degree,
    hilbert_series,
    multiply_monomials,
    substitute,
    to_rational,
)
from sullivan_brane.exceptions import StructuralError
from sullivan_brane.mapping import build_disk_model, build_sphere_model, prepare_base
from sullivan_brane.models import Generator


@pytest.fixture
def table():
    """x of degree 2, y and z of degree 3."""
    return GeneratorTable(
        [
            Generator(name="x", degree=2),
            Generator(name="y", degree=3),
            Generator(name="z", degree=3),
        ]
    )


@pytest.fixture
def gens(table):
    return tuple(GradedPolynomial.generator(table, name) for name in ("x", "y", "z"))


def test_to_rational_accepts_sympy_rationals_and_ints():
    """Test coercion into QQ."""
    assert to_rational(Rational(1, 2)) == QQ(1, 2)
    assert to_rational(3) == QQ(3)


def test_table_lookup(table):
    """Test generator lookup by name and index."""
    assert table.index("y") == 1
    assert table.index(2) == 2
    assert "z" in table
    with pytest.raises(StructuralError):
        table.index("w")
    with pytest.raises(StructuralError):
        table.index(5)


def test_table_rejects_duplicate_names():
    """Test generator names must be unique."""
    with pytest.raises(StructuralError):
        GeneratorTable([Generator(name="x", degree=2), Generator(name="x", degree=4)])


def test_odd_generator_squares_to_zero(gens):
    """Test y·y = 0 for odd y."""
    _, y, _ = gens
    assert (y * y).is_zero()


def test_odd_generators_anticommute(gens):
    """Test y·z = -z·y."""
    _, y, z = gens
    assert y * z == -(z * y)
    assert not (y * z).is_zero()


def test_even_generator_is_central(gens):
    """Test x·y = y·x."""
    x, y, _ = gens
    assert x * y == y * x


def test_koszul_sign_of_monomials(table):
    """Test the sign of moving z past y."""
    sign, mono = multiply_monomials((0, 0, 1), (0, 1, 0), table)
    assert sign == -1
    assert mono == (0, 1, 1)
    sign, _ = multiply_monomials((0, 1, 0), (0, 1, 0), table)
    assert sign == 0


def test_polynomial_string(table, gens):
    """Test deterministic printing, higher degree first."""
    x, y, _ = gens
    poly = x * x + (x * y).scale(2) - GradedPolynomial.constant(table, 3)
    assert str(poly) == "2*x*y + x^2 - 3"
    assert str(GradedPolynomial.zero(table)) == "0"
    assert str(x.scale(QQ(-1, 2))) == "-1/2*x"


def test_degree_of_homogeneous_polynomial(gens):
    """Test degree of homogeneous and zero polynomials."""
    x, y, _ = gens
    assert (x * y).degree == 5
    assert (x - x).degree is None


def test_degree_of_inhomogeneous_polynomial_raises(gens):
    """Test degree is undefined for mixed degrees."""
    x, y, _ = gens
    poly = x + y
    assert not poly.is_homogeneous()
    with pytest.raises(StructuralError):
        poly.degree


def test_powers(gens):
    """Test integer powers."""
    x, y, _ = gens
    assert (x ** 3).degree == 6
    assert (y ** 2).is_zero()
    with pytest.raises(StructuralError):
        x ** -1


def test_mixed_tables_raise(table, gens):
    """Test products across different tables are rejected."""
    other = GeneratorTable([Generator(name="a", degree=2)])
    with pytest.raises(StructuralError):
        gens[0] * GradedPolynomial.generator(other, "a")


def test_extend_and_restrict(table, gens):
    """Test prefix embedding and its inverse."""
    x, y, _ = gens
    bigger = table.extend([Generator(name="w", degree=4)])
    lifted = (x * y).extended(bigger)
    assert lifted.table == bigger
    assert lifted.restricted(table) == x * y

    w = GradedPolynomial.generator(bigger, "w")
    with pytest.raises(StructuralError):
        w.restricted(table)


def test_substitute_swaps_odd_generators(table, gens):
    """Test an algebra map exchanging y and z."""
    x, y, z = gens
    swapped = substitute(y * z, table, [x, z, y])
    assert swapped == -(y * z)


def test_basis_of_degree(table):
    """Test monomial enumeration in descending order."""
    assert basis_of_degree(5, table) == ((1, 1, 0), (1, 0, 1))
    assert basis_of_degree(6, table) == ((3, 0, 0), (0, 1, 1))
    assert basis_of_degree(1, table) == ()
    assert basis_of_degree(-1, table) == ()


def test_hilbert_series_matches_basis(table):
    """Test the Hilbert series against monomial counts."""
    series = hilbert_series(table, 12)
    assert series == [len(basis_of_degree(n, table)) for n in range(13)]
    assert series[:7] == [1, 0, 1, 2, 1, 2, 2]


PROPERTY_DEGREE = 16


def disk_table(A):
    return build_disk_model(build_sphere_model(prepare_base(A), 1)).algebra.table


def monomials_by_degree(table, max_degree=PROPERTY_DEGREE):
    return [basis for basis in (basis_of_degree(n, table) for n in range(max_degree + 1)) if basis]


def random_monomial(rng, bases):
    return rng.choice(rng.choice(bases))


@pytest.mark.parametrize("name", ["s2", "cp2", "s3xs3"])
def test_monomial_product_is_associative(corpus, name):
    """Test (ab)c = a(bc) with signs on random monomials."""
    table = disk_table(corpus(name))
    bases = monomials_by_degree(table)
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (random_monomial(rng, bases) for _ in range(3))
        s_ab, ab = multiply_monomials(a, b, table)
        s_bc, bc = multiply_monomials(b, c, table)
        left = s_ab * multiply_monomials(ab, c, table)[0] if s_ab else 0
        right = s_bc * multiply_monomials(a, bc, table)[0] if s_bc else 0
        assert left == right, (a, b, c)
        if left:
            assert multiply_monomials(ab, c, table)[1] == multiply_monomials(a, bc, table)[1]


@pytest.mark.parametrize("name", ["s2", "cp2", "s3xs3"])
def test_monomial_product_is_graded_commutative(corpus, name):
    """Test ab = (-1)^{|a||b|} ba on random monomials."""
    table = disk_table(corpus(name))
    bases = monomials_by_degree(table)
    rng = random.Random(11)
    for _ in range(200):
        a, b = random_monomial(rng, bases), random_monomial(rng, bases)
        s_ab, ab = multiply_monomials(a, b, table)
        s_ba, ba = multiply_monomials(b, a, table)
        koszul = -1 if table.monomial_degree(a) * table.monomial_degree(b) % 2 else 1
        assert s_ab == koszul * s_ba, (a, b)
        if s_ab:
            assert ab == ba
