"""Exception types raised by the package."""


class SecureSRError(Exception):
    """Base class for all package errors."""


class IllConditionedPairError(SecureSRError, ValueError):
    """Denominator of a generalized eigenproblem is numerically singular."""


class DimensionError(SecureSRError, ValueError):
    """Requested subspace dimension is not available."""


class DegenerateChannelError(SecureSRError, ValueError):
    """A channel draw violates its invariants (zero or non-finite)."""


class SingularCorrelationError(SecureSRError, ValueError):
    """The eavesdropper AN correlation matrix X is not invertible."""


class DegenerateBeamError(SecureSRError, ValueError):
    """The beamformer carries no power towards the backscatter device."""


class ConfigurationError(SecureSRError, ValueError):
    """Invalid parameter combination."""


class NumericalError(SecureSRError, ArithmeticError):
    """A non-finite value appeared during optimization."""
