"""Exception types shared across the package."""


class QwasserError(Exception):
    """Base class for every error raised by this package."""


class ContractViolation(QwasserError):
    """An internal call received a value outside its documented contract."""


class DomainError(QwasserError, ValueError):
    """User-supplied input lies outside the mathematical domain."""


class InternalConsistencyError(QwasserError):
    """A quantity that must come out real or consistent did not."""


class SolverAccuracyError(QwasserError):
    """The optimizer did not reach the accuracy a derived result requires."""
