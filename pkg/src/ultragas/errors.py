"""Shared exception types."""


class DomainError(ValueError):
    """An evaluation was requested outside the convergence domain.

    Carries the offending index subset when one is known, so callers can
    report which linear-form constraint failed.
    """

    def __init__(self, message, subset=None):
        if subset is not None:
            message = f"{message}: Re(e_lambda) <= 0 for lambda={{{','.join(map(str, subset))}}}"
        super().__init__(message)
        self.subset = tuple(subset) if subset is not None else None


class PoleError(ValueError):
    """A denominator vanished at an otherwise admissible parameter point."""
