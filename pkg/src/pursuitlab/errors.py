"""Exception hierarchy shared by all solvers."""


class PursuitError(Exception):
    """Base class for every error raised by pursuitlab."""


class DomainError(PursuitError, ValueError):
    """Input outside the mathematical domain of an operation (e.g. v >= Vp)."""


class SizeError(PursuitError, ValueError):
    """Instance larger than an operation's enumeration guard."""


class InfeasibleError(PursuitError, ValueError):
    """No feasible assignment, tour or completion exists."""


class SolverError(PursuitError, RuntimeError):
    """A solver failed in a way that indicates numerical trouble."""
