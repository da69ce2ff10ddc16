"""Exception taxonomy shared across the package.

The CLI maps these onto process exit codes: configuration problems exit
with 2, numerical aborts (NaN, constraint drift, time-cut) with 3, and
failed verification suites with 4.
"""


class CurveFlowError(Exception):
    """Base class for all package-specific errors."""


class InvalidArgumentError(CurveFlowError, ValueError):
    """An argument violates a documented contract (shape, domain, kind)."""


class PreconditionError(CurveFlowError, ValueError):
    """Input data violates a mathematical precondition of an operation."""


class ConfigError(CurveFlowError, ValueError):
    """Malformed or inconsistent run configuration."""


class NumericalAbortError(CurveFlowError, RuntimeError):
    """A run was stopped: NaN/Inf state or embedding-constraint breach."""

    def __init__(self, message: str, step: int | None = None, t: float | None = None):
        super().__init__(message)
        self.step = step
        self.t = t


class TimeCutReachedError(NumericalAbortError):
    """The monitored gauge energy doubled relative to its initial value."""


class VerificationError(CurveFlowError, RuntimeError):
    """An identity or gradient verification suite reported a failure."""
