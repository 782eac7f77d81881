"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Matrix or tensor dimensions do not fit the operation."""


class ContractError(ValueError):
    """An input violates a structural precondition (skewness, symmetry, ...)."""


class PreconditionError(ValueError):
    """An input is outside the domain where the operation is defined."""


class DegenerateError(RuntimeError):
    """Random sampling kept producing non-generic data up to the retry cap."""
