"""Degree bounds and verification windows."""

from typing import Iterable, Optional, Tuple

from sullivan_brane.algebra import GeneratorTable
from sullivan_brane.exceptions import DegreeBoundError


def window_width(table: GeneratorTable) -> int:
    """Width of the finite-dimensionality window above a candidate top degree.

    The largest even generator degree, or the largest degree overall when
    there are no even generators.

    Args:
        table: Generator table of the model

    Returns:
        Window width, at least 1
    """
    evens = [d for d, odd in zip(table.degrees, table.odd) if not odd]
    if evens:
        return max(evens)
    return max(table.degrees, default=1)


def shriek_check_bound(formal_dimension: int, k: int) -> int:
    """Default degree through which shriek cocycles are checked: 2m + 2k."""
    return 2 * max(formal_dimension, 0) + 2 * k


class DegreeBound:
    """Degree bound of a single computation."""

    def __init__(self, max_degree: int, label: str = "computation"):
        """Initialize the bound.

        Args:
            max_degree: Largest degree the computation may touch
            label: Name used in messages
        """
        if max_degree < 0:
            raise DegreeBoundError(f"{label}: degree bound must be nonnegative, got {max_degree}")
        self.max_degree = max_degree
        self.label = label

    def check(self, degree: int) -> Tuple[bool, Optional[str]]:
        """Check whether a degree is within the bound.

        Args:
            degree: Degree to validate

        Returns:
            Tuple of (is_valid, error_message)
        """
        if degree > self.max_degree:
            return False, f"{self.label} needs degree {degree}, above the bound {self.max_degree}"
        return True, None

    def require(self, degree: int) -> None:
        """Raise DegreeBoundError when a degree is out of bounds."""
        ok, message = self.check(degree)
        if not ok:
            raise DegreeBoundError(message, required_bound=degree)

    def window(self, top: int, width: int) -> Iterable[int]:
        """Degrees top+1..top+width, which must all lie within the bound."""
        self.require(top + width)
        return range(top + 1, top + width + 1)

    def class_limit(self, shift: int) -> int:
        """Largest class degree n with n + shift within the bound."""
        return self.max_degree - shift
