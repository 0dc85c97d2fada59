"""Error hierarchy shared by every simulation module.

Management commands map these onto exit codes: configuration and domain
errors exit with 2, numerical failures with 3.
"""


class FramedragError(Exception):
    """Base class for all simulator errors."""


class ConfigurationError(FramedragError):
    """Invalid, unknown or unparsable configuration."""


class DomainError(FramedragError, ValueError):
    """An operation was called outside its precondition."""


class WindowError(DomainError):
    """A label falls outside a basis window, or the window is too narrow."""


class OutOfRegimeError(DomainError):
    """A closed-form expression was evaluated outside its validity domain."""


class SingularTimeError(DomainError):
    """The detection variance map is singular at the requested time."""


class NumericalError(FramedragError):
    """A numerical procedure failed or drifted past its tolerance."""


class TraceDriftError(NumericalError):
    pass


class NegativeStateError(NumericalError):
    pass


class EigensolverError(NumericalError):
    pass
