"""Exception hierarchy for the noisyodds package."""


class NoisyOddsError(Exception):
    """Base class for all package errors."""


class DomainError(NoisyOddsError, ValueError):
    """Input outside the mathematical domain of an operation."""


class DegenerateDistributionError(NoisyOddsError, ValueError):
    """A density was requested for a distribution that collapses to a point mass."""


class NoRegionError(NoisyOddsError, ValueError):
    """No printed piecewise condition covers the requested parameter point."""


class NoRootError(NoisyOddsError, RuntimeError):
    """A bracketed root search found no sign change."""


class EmptySelectionError(NoisyOddsError, ValueError):
    """A ledger filter selected too few records to estimate from."""
