"""Exception hierarchy shared by all edge3c modules."""


class Edge3CError(Exception):
    """Base class for all edge3c errors."""


class DomainError(Edge3CError, ValueError):
    """A parameter lies outside its mathematical domain."""


class InfeasibleLatency(Edge3CError, ValueError):
    """The latency budget cannot cover the compute delay, so no task can finish."""


class BudgetInfeasible(Edge3CError, ValueError):
    """Cache budget outside [0, M]."""


class WrongBranch(Edge3CError, ValueError):
    """An asymptotic expression was requested on the wrong side of gamma = 1."""


class NoRoot(Edge3CError, ArithmeticError):
    """A root-finding step has no root in its bracket (should not happen for valid inputs)."""


class TruncationError(Edge3CError, RuntimeError):
    """The simulation disk radius needed to meet the truncation tolerance exceeds the cap."""


class ParseError(Edge3CError, ValueError):
    """Malformed experiment config file."""


class ValidationError(Edge3CError, ValueError):
    """Experiment spec violates one of its invariants."""
