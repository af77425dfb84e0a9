"""
Error hierarchy for the toolkit.

The root does not derive from ValueError: pydantic only wraps ValueError and
AssertionError raised inside validators, so these errors reach callers as-is.
"""
from typing import Any


class OperatorEntropyError(Exception):
    """Root of every error raised by the toolkit"""

    error_type = "domain"


class DomainViolation(OperatorEntropyError):
    def __init__(self, value: float, domain: Any):
        self.value = float(value)
        self.domain = domain
        super().__init__(f"Value {self.value!r} lies outside the domain {domain}")


class DimensionMismatch(OperatorEntropyError):
    pass


class InvalidSpectrum(OperatorEntropyError):
    pass


class NotStrictlyPositive(OperatorEntropyError):
    def __init__(self, name: str, min_eigenvalue: float):
        self.name = name
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(
            f"Matrix {name} must be strictly positive (smallest eigenvalue {self.min_eigenvalue!r})"
        )


class ParameterOutOfRange(OperatorEntropyError):
    pass


class NonpositiveH(OperatorEntropyError):
    def __init__(self, value: float):
        self.value = float(value)
        super().__init__(f"Weight function h must be strictly positive, got h(t) = {self.value!r}")


class NoSignChange(OperatorEntropyError):
    pass


class MultipleSignChanges(OperatorEntropyError):
    pass


class ContractionViolation(OperatorEntropyError):
    pass


class DomainMismatch(OperatorEntropyError):
    pass


class ProbeAborted(OperatorEntropyError):
    """A campaign hit a DomainViolation; the trial is not counted as a violation"""

    def __init__(self, trial: int, cause: Exception):
        self.trial = trial
        self.cause = cause
        super().__init__(f"Campaign aborted at trial {trial}: {cause}")


# --- INPUT / USAGE ERRORS ---

class UsageError(OperatorEntropyError):
    error_type = "usage"


class MatrixFormatError(UsageError):
    pass


class AsymmetricMatrix(MatrixFormatError):
    pass


class SpecParseError(UsageError):
    pass


class UnknownClaim(UsageError):
    pass
