"""Test degree bounds and verification windows."""

import pytest

from sullivan_brane.algebra import GeneratorTable
from sullivan_brane.bounds import DegreeBound, shriek_check_bound, window_width
from sullivan_brane.exceptions import DegreeBoundError
from sullivan_brane.models import Generator


def table_of(*degrees):
    return GeneratorTable([Generator(name=f"g{i}", degree=d) for i, d in enumerate(degrees)])


def test_window_width_uses_largest_even_degree():
    """Test the window is the largest even generator degree."""
    assert window_width(table_of(2, 3, 4, 11)) == 4


def test_window_width_without_evens():
    """Test odd-only models fall back to the largest degree."""
    assert window_width(table_of(3, 5)) == 5


def test_shriek_check_bound():
    """Test 2m + 2k, with negative m clamped."""
    assert shriek_check_bound(4, 1) == 10
    assert shriek_check_bound(2, 3) == 10
    assert shriek_check_bound(-1, 1) == 2


def test_check_within_bound():
    """Test degrees at or below the bound pass."""
    bound = DegreeBound(6, label="test")
    assert bound.check(6) == (True, None)
    ok, message = bound.check(7)
    assert ok is False
    assert "test needs degree 7" in message


def test_require_reports_required_bound():
    """Test the error carries the degree that was needed."""
    with pytest.raises(DegreeBoundError) as exc_info:
        DegreeBound(4).require(9)
    assert exc_info.value.required_bound == 9


def test_window():
    """Test the window is top+1..top+width and must fit."""
    bound = DegreeBound(8)
    assert list(bound.window(4, 4)) == [5, 6, 7, 8]
    with pytest.raises(DegreeBoundError):
        bound.window(4, 5)


def test_class_limit():
    """Test the largest class degree under a shift."""
    assert DegreeBound(12).class_limit(4) == 8


def test_negative_bound():
    """Test negative bounds are rejected."""
    with pytest.raises(DegreeBoundError):
        DegreeBound(-1)
