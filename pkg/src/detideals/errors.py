"""Exception types shared by every module.

Two families matter to callers: ``InputError`` for malformed requests and
``ContractViolation`` for well-formed requests whose mathematical
preconditions fail.  ``BudgetExceeded`` is kept apart so that callers can
retry with a larger budget.
"""


class DetIdealsError(Exception):
    """Base class for all errors raised by this package."""


class InputError(DetIdealsError, ValueError):
    """Malformed input: bad JSON, unknown variable names, wrong arity."""


class ContractViolation(DetIdealsError):
    """A precondition of an operation does not hold for the given input."""


class BudgetExceeded(DetIdealsError):
    """An expansion grew past the caller's term budget."""


class ZeroPolynomial(ContractViolation):
    pass


class NotInIdeal(ContractViolation):
    pass


class ShapeOutOfBounds(ContractViolation):
    pass


class EntryOutOfBounds(ContractViolation):
    pass


class DegreeBoundExceeded(ContractViolation):
    pass


class TooManyVertices(ContractViolation):
    pass


class NotAnApproximation(ContractViolation):
    pass


class UnsupportedCharacteristic(ContractViolation):
    pass


class OddOrder(ContractViolation):
    pass


class NotSkew(ContractViolation):
    pass


class InconsistentSchedule(ContractViolation):
    pass


class BadOmega(ContractViolation):
    pass


class CondenserTooSmall(ContractViolation):
    pass


class VariableMismatch(ContractViolation):
    pass


class CertificateInvalid(ContractViolation):
    pass


class NoWitness(ContractViolation):
    pass


class MembershipDisagreement(ContractViolation):
    """The width criterion and the brute-force span test disagree."""


class VerificationFailed(ContractViolation):
    """A constructed object failed its own exact self-check."""
