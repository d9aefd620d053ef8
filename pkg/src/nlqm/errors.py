"""Exception types shared across the package."""


class NlqmError(Exception):
    """Base class for all package errors."""


class ParameterError(NlqmError, ValueError):
    """Invalid model parameters (non-finite input, N <= 0, bad config)."""


class RegimeError(NlqmError, ValueError):
    """Operation requested outside its parameter regime.

    Examples: s-reparameterization with b + mu = 0, fixed point outside the
    bounded regime, oscillatory closed form below the potential barrier.
    """


class DomainError(NlqmError, ValueError):
    """Mathematical domain violation (e.g. singular elliptic integrand)."""


class AccuracyError(NlqmError, RuntimeError):
    """A numerical consistency monitor exceeded its tolerance."""


class SolveError(NlqmError, RuntimeError):
    """An iterative solver failed to reach the requested residual."""
