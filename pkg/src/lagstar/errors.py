"""Exception hierarchy shared by all modules."""


class LagstarError(Exception):
    """Base class for package errors."""


class DomainError(LagstarError, ValueError):
    """Argument outside the domain of a function or curve."""


class SingularPointError(LagstarError, ValueError):
    """Evaluation requested at a branch point where alpha(t) = 0 = omega(s)."""


class QuadratureError(LagstarError, ArithmeticError):
    """Integrand produced non-finite values or the table failed to converge."""


class IntegrationError(LagstarError, ArithmeticError):
    """ODE integrator could not meet its tolerance."""


class MissingPeriodError(LagstarError, ValueError):
    """A periodicity check was requested on an aperiodic curve."""


class MeshIOError(LagstarError, OSError):
    """A mesh file could not be written; the message names the path."""
