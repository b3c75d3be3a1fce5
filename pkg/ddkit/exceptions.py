"""
    Purpose: one exception hierarchy for the whole toolkit; the command line maps
    failures onto exit codes by type

    Usage: engines raise the specific subclasses below; commands wrap them into
    CommandError, which carries the exit code and the message for stderr
"""


class DDKitError(Exception):
    """Base class for every error raised by ddkit."""


class SequenceError(DDKitError, ValueError):
    """Malformed arguments: bad orders, non-positive durations, unsorted pulses."""


class ConfigError(DDKitError, ValueError):
    """Experiment configuration failed validation."""


class PreconditionError(DDKitError, ValueError):
    """An operation was called on an input outside its domain (e.g. relaxation terms present)."""


class ResolutionError(DDKitError):
    """A grid is too coarse for the requested frequency or harmonic range."""


class CoverageError(DDKitError):
    """A time grid does not cover [0, T] or misses pulse times."""


class BranchCutError(DDKitError):
    """An eigenphase sits too close to +/-pi for a principal logarithm."""


class ConsistencyError(DDKitError):
    """Two independent evaluations of the same quantity disagree."""


class NonIntegrableSpectrumError(DDKitError):
    """A noise spectrum cannot be integrated against the filter function."""


class CommandError(Exception):
    """
    Error raised by a command handler

    Attributes:
        exit_code (int): process exit code, 1 for numeric failures and 2 for usage errors
        detail (str): human readable message printed on stderr
    """

    def __init__(self, exit_code: int, detail: str):
        super().__init__(detail)
        self.exit_code = exit_code
        self.detail = detail
