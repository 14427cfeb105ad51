"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Model dimensions (m, n, p) or an index fall outside the formula's domain."""


class NumericRangeError(ArithmeticError):
    """An exact evaluation escaped double-precision range or produced a non-probability."""


class RegimeError(ValueError):
    """A high-dimensional law was requested outside the regime where it holds."""
