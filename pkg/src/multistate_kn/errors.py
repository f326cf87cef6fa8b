"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Monomials or models with mismatched variable counts."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class ResourceError(RuntimeError):
    """An enumeration would exceed its configured budget."""

    def __init__(self, message: str, size: int | None = None):
        super().__init__(message)
        self.size = size


class ValidationError(ValueError):
    """Malformed input document."""
