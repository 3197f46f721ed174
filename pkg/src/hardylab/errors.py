"""Exception hierarchy shared by every hardylab module."""


class HardylabError(Exception):
    pass


class InvalidArgumentError(HardylabError, ValueError):
    pass


class BracketError(HardylabError, ValueError):
    """The function does not change sign on the supplied bracket."""


class ConvergenceError(HardylabError, RuntimeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DomainMismatchError(HardylabError, ValueError):
    pass


class PreconditionError(HardylabError, ValueError):
    pass


class ResolutionError(HardylabError, ValueError):
    pass


class SingularIntegrandError(HardylabError, ValueError):
    pass


class DegenerateInputError(HardylabError, ValueError):
    pass


class InconsistencyError(HardylabError, ValueError):
    pass


class Lim0Warning(UserWarning):
    """Raised (as a warning) when a profile violates the log boundary condition at the origin."""
