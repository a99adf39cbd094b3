"""Exception hierarchy.

``ValidationError`` covers malformed inputs (the CLI maps it to exit code 1);
``DomainError`` covers well-formed inputs on which an operation is undefined
(exit code 2).
"""


class SuperprobError(Exception):
    """Base class for all library errors."""


class ValidationError(SuperprobError, ValueError):
    pass


class DuplicateLabelError(ValidationError):
    pass


class NegativeProbabilityError(ValidationError):
    pass


class NormalizationError(ValidationError):
    pass


class EmptyEventError(ValidationError):
    pass


class UnknownLabelError(ValidationError, KeyError):
    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class PartitionError(ValidationError):
    pass


class DensityMatrixError(ValidationError):
    pass


class SpaceMismatchError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class NotABasisError(ValidationError):
    pass


class CapExceededError(ValidationError):
    pass


class DomainError(SuperprobError):
    pass


class ConditioningOnNullError(DomainError, ZeroDivisionError):
    pass


class NullIntersectionError(DomainError):
    pass


class ZeroVectorError(DomainError):
    pass


class SingularMatrixError(DomainError):
    pass


class InternalConsistencyError(DomainError, AssertionError):
    pass
