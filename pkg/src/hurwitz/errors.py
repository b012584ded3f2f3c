"""Exception types shared across the package."""


class CapExceeded(Exception):
    """A configured resource cap (closure size or search work) was hit."""


class InvariantViolation(Exception):
    """An internal consistency check failed; this signals a bug, not bad input."""
