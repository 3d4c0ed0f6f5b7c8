"""Exception types shared across the package."""


class EdgeListError(ValueError):
    """Malformed edge-list input. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PatternFormatError(ValueError):
    """Structurally invalid quotient-pattern document."""


class InvalidPatternError(ValueError):
    """Pattern is well-formed but describes no percolating tree (rho < 1)."""
