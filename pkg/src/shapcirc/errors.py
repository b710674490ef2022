"""Exception hierarchy.

Three families, mirrored by the CLI exit codes:

* :class:`InputError` -- malformed or inconsistent input (exit 2)
* :class:`PreconditionError` -- well-formed input the algorithms refuse (exit 3)
* :class:`EfficiencyViolation` -- internal consistency failure (exit 4)
"""


class ShapCircError(Exception):
    """Base class for every error raised by this package."""


class InputError(ShapCircError, ValueError):
    pass


class PositionedError(InputError):
    """Input error carrying a 1-based line/column position."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(str(self))

    def __str__(self):
        if self.line is None:
            return self.message
        if self.col is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, col {self.col}: {self.message}"


# circuit structure
class EmptyCircuit(InputError):
    pass


class CycleOrForwardReference(InputError):
    pass


class MultipleOutputs(InputError):
    pass


class UnknownFeature(InputError):
    pass


class InvalidFeatureName(InputError):
    pass


class DomainMismatch(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


# text formats
class CircuitSyntaxError(PositionedError):
    pass


class UnknownGateRef(PositionedError):
    pass


class DuplicateId(PositionedError):
    pass


class MissingOutput(PositionedError):
    pass


class MissingFeature(PositionedError):
    pass


class ExtraFeature(PositionedError):
    pass


class ValueOutOfRange(PositionedError):
    pass


class BadRational(PositionedError):
    pass


class InvalidProbability(ValueOutOfRange):
    pass


class NotThreeCnf(PositionedError):
    pass


class RepeatedFeatureInTerm(PositionedError):
    pass


# algorithm preconditions
class PreconditionError(ShapCircError):
    pass


class PreconditionViolated(PreconditionError):
    pass


class PreprocessingMissing(PreconditionError):
    pass


class NotFanin2(PreconditionError):
    pass


class NotDecomposable(PreconditionError):
    def __init__(self, message, gate=None, feature=None):
        super().__init__(message)
        self.gate = gate
        self.feature = feature


class DecomposabilityViolation(NotDecomposable):
    """A circuit declared d-DNNF by its producer fails the syntactic check."""


class NotDeterministic(PreconditionError):
    def __init__(self, message, gate=None, witness=None):
        super().__init__(message)
        self.gate = gate
        self.witness = witness


class NotFree(PreconditionError):
    def __init__(self, message, node=None, feature=None):
        super().__init__(message)
        self.node = node
        self.feature = feature


class TooLarge(PreconditionError):
    pass


class TooLargeForBruteForce(TooLarge):
    pass


class EfficiencyViolation(ShapCircError, AssertionError):
    """Scores do not sum to output minus expectation: an engine bug."""
