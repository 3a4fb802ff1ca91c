"""Exception types raised across the package."""


class GsdError(Exception):
    """Base class for all package errors."""


class SizeLimitExceeded(GsdError):
    """An exhaustive routine was asked to run above its configured size limit."""


class UnknownVertex(GsdError, KeyError):
    pass


class SelfLoop(GsdError, ValueError):
    pass


class UnknownQubit(GsdError, KeyError):
    pass


class ForcedOutcomeImpossible(GsdError, ValueError):
    pass


class SizeMismatch(GsdError, ValueError):
    pass


class UnsupportedClass(GsdError, ValueError):
    pass


class DeadCompanion(GsdError):
    pass


class ProtocolOrderViolation(GsdError):
    pass


class TargetMismatch(GsdError):
    pass


class SystemMismatch(GsdError):
    pass


class InsufficientTargets(GsdError, ValueError):
    pass


class InsufficientAux(GsdError, ValueError):
    pass


class GraphSpecError(GsdError, ValueError):
    """A graph file or generator string could not be parsed."""
