"""Exception hierarchy shared across the package."""


class BracketkitError(Exception):
    """Base class for all package errors."""


class InputError(BracketkitError, ValueError):
    """A caller violated a documented precondition."""


class DegeneracyError(BracketkitError):
    """Point configuration is not in general position for the requested enumeration."""


class ResourceBudgetError(BracketkitError):
    """An enumeration exceeded its configured intermediate-size budget."""


class InternalInvariantError(BracketkitError):
    """An internal invariant (e.g. a recursion depth cap) was violated."""


class PreconditionFailure(BracketkitError):
    """A verified precondition failed; carries the failing verification report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NonRealizableError(BracketkitError):
    """A protocol run hit an input with no consistent hypothesis.

    ``certificate`` is the inconsistent labeled subset accumulated so far,
    ``transcript`` the messages exchanged up to the abort.
    """

    def __init__(self, message, certificate=(), transcript=None):
        super().__init__(message)
        self.certificate = tuple(certificate)
        self.transcript = transcript
