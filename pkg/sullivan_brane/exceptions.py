"""Exception hierarchy for Sullivan Brane."""

from typing import Optional


class SullivanBraneError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(SullivanBraneError):
    """Operands do not live over compatible generator tables."""


class DomainError(SullivanBraneError):
    """An operation was applied outside of its domain."""


class DegreeBoundError(SullivanBraneError):
    """A computation needs data above the configured degree bound."""

    def __init__(self, message: str, required_bound: Optional[int] = None):
        self.required_bound = required_bound
        if required_bound is not None:
            message = f"{message} (rerun with a degree bound of at least {required_bound})"
        super().__init__(message)


class ModelConstructionError(SullivanBraneError):
    """A mapping-space model could not be built."""


class IterationCapError(ModelConstructionError):
    """The (sd)-iteration of the loop formula did not vanish within the cap."""

    def __init__(self, generator: str, cap: int):
        self.generator = generator
        self.cap = cap
        super().__init__(
            f"(sd)-iteration for generator '{generator}' did not vanish after {cap} steps"
        )


class ModelParseError(SullivanBraneError):
    """Syntax or semantic error in a model file."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.reason = message
        super().__init__(f"line {line}, column {column}: {message}")


class PoincareDualityError(SullivanBraneError):
    """The cohomology is not a Poincaré duality algebra in the requested degree."""


class FinitenessError(SullivanBraneError):
    """Model not verifiably finite-dimensional within the degree bound."""


class PurityError(SullivanBraneError):
    """A pure Sullivan model is required."""


class ConsistencyError(SullivanBraneError):
    """An identity that holds by construction failed on concrete data."""
