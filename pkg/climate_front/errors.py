# -*- mode:python; coding:utf-8; -*-
# created: 2026-10-17

"""Free boundary laboratory common error classes."""

__all__ = [
    'LabError',
    'ConfigurationError',
    'UsageError',
    'PreconditionError',
    'SolverError',
    'ConvergenceError',
    'TrivialBranchError',
    'TruncationError',
    'BracketError',
    'MonotonicityError',
    'StabilityError',
    'NotSpreadingError',
    'AcceptanceError',
    'LineageError',
]


class LabError(Exception):

    """Base class for all laboratory errors."""

    pass


class ConfigurationError(LabError):

    """Invalid run configuration error."""

    pass


class UsageError(LabError):

    """Command line usage error."""

    pass


class PreconditionError(LabError):

    """
    An operation was called outside of the hypotheses it is valid for
    (e.g. a forced semi-wave requested for c > c0).
    """

    pass


class SolverError(LabError):

    """Base class for numerical solver failures."""

    pass


class ConvergenceError(SolverError):

    """Iterative solver did not converge."""

    def __init__(self, message, iterations=None, residual=None):
        """
        Parameters
        ----------
        message : str
            Error message.
        iterations : int, optional
            Number of performed iterations.
        residual : float, optional
            Last computed residual norm.
        """
        super(ConvergenceError, self).__init__(message)
        self.iterations = iterations
        self.residual = residual


class TrivialBranchError(SolverError):

    """Newton iteration collapsed onto the zero solution."""

    pass


class TruncationError(SolverError):

    """Left truncation radius exceeded its hard cap."""

    pass


class BracketError(SolverError):

    """Root bracket is invalid or could not be established."""

    def __init__(self, message, table=None):
        """
        Parameters
        ----------
        message : str
            Error message.
        table : list of tuple, optional
            Diagnostic (argument, value) pairs evaluated while bracketing.
        """
        super(BracketError, self).__init__(message)
        self.table = table or []


class MonotonicityError(SolverError):

    """A sequence that must be strictly monotone is not."""

    def __init__(self, message, pair=None):
        super(MonotonicityError, self).__init__(message)
        self.pair = pair


class StabilityError(SolverError):

    """Explicit time stepping became unstable."""

    pass


class NotSpreadingError(LabError):

    """An asymptotic analysis was requested for a non-spreading run."""

    pass


class AcceptanceError(LabError):

    """An acceptance check failed."""

    pass


class LineageError(LabError):

    """Output files do not belong to the configuration being certified."""

    pass
