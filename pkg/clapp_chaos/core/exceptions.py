"""
Error hierarchy.

Every error raised by the toolkit derives from ClappError and belongs to one
of two families. The family fixes the CLI exit code:

    InputError    (exit 1)  invalid parameters, malformed files, bad brackets
    NumericError  (exit 2)  overflow, non-convergence, integration failure

Example:
    >>> try:
    ...     solve_equilibrium(circuit, bjt)
    ... except ClappError as e:
    ...     sys.exit(e.exit_code)
"""

from typing import Any, Optional


class ClappError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 2


class InputError(ClappError, ValueError):
    """
    Invalid input: parameters, files, configuration.

    Attributes:
        field: Name of the offending field or key, if known
    """

    exit_code = 1

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class ConfigError(InputError):
    """Configuration text could not be parsed or validated."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        key: Optional[str] = None,
    ):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}", field=key)
        self.line = line
        self.key = key


class DegenerateDesignError(InputError):
    """Least-squares design matrix is rank deficient."""


class BracketError(InputError):
    """A bisection bracket does not contain a sign change."""


class NumericError(ClappError, ArithmeticError):
    """A numerical procedure failed."""

    exit_code = 2


class ExponentRangeError(NumericError):
    """
    Junction exponent exceeds the configured cap.

    Attributes:
        exponent: The offending exponent eta * v / V_T
        cap: The configured cap
    """

    def __init__(self, exponent: float, cap: float):
        super().__init__(f"junction exponent {exponent:.6g} exceeds cap {cap:.6g}")
        self.exponent = exponent
        self.cap = cap


class ConvergenceError(NumericError):
    """
    Iterative solver hit its iteration cap.

    Attributes:
        best: Best iterate reached before giving up
        iterations: Number of iterations performed
    """

    def __init__(self, message: str, best: float, iterations: int):
        super().__init__(message)
        self.best = best
        self.iterations = iterations


class IntegrationError(NumericError):
    """
    Time integration stopped before reaching the end time.

    Attributes:
        time: Time at which integration failed
        partial: Trajectory (or other partial result) accumulated so far
    """

    def __init__(self, message: str, time: float, partial: Any = None):
        super().__init__(message)
        self.time = time
        self.partial = partial


class StiffnessError(IntegrationError):
    """Step size fell below the minimum step."""


class EigenError(NumericError):
    """Dense eigenvalue computation failed."""
