"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class NumericError(ArithmeticError):
    """A computation produced a non-finite value."""


class RankDeficiencyError(ArithmeticError):
    """The normal-equations matrix is singular at the optimum."""


class ParseError(ValueError):
    """Malformed input data. ``line`` is the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateKeyError(ParseError):
    """The same (country, year) pair appears more than once."""
