"""Exception hierarchy and CLI exit codes."""

from typing import Any, Optional


class AltGDAError(Exception):
    """Base class for every error raised by altgda."""


class DimensionMismatchError(AltGDAError, ValueError):
    """A vector or matrix does not have the dimensions the game requires."""


class StageError(AltGDAError, ValueError):
    """A state carries the wrong stage tag for the requested update."""


class WrongModeError(AltGDAError, ValueError):
    """A trajectory was produced by a dynamic the operation does not accept."""


class MissingHalfStatesError(AltGDAError, ValueError):
    """An alternating quantity was requested from a trajectory without Half states."""


class OpponentContractError(AltGDAError):
    """An opponent rule returned a wrong-length or non-finite strategy."""

    def __init__(self, message: str, round_index: int):
        super().__init__(f"round {round_index}: {message}")
        self.round_index = round_index


class DivergenceError(AltGDAError):
    """A strategy component left the representable range during a rollout."""

    def __init__(self, step: int, value: float, partial: Optional[Any] = None):
        super().__init__(f"diverged at step {step}: |component| = {value:.3e}")
        self.step = step
        self.value = value
        self.partial = partial
        """Trajectory recorded up to (excluding) the diverged step, if any."""


class ConvergenceError(AltGDAError):
    """An iterative method did not converge within its iteration budget."""

    def __init__(self, message: str, last_estimate: float, iterations: int):
        super().__init__(f"{message} (last estimate {last_estimate!r} after {iterations} iterations)")
        self.last_estimate = last_estimate
        self.iterations = iterations


class ConfigError(AltGDAError):
    """An experiment configuration could not be parsed or validated."""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        where = ""
        if source:
            where = f"{source}:"
        if line is not None:
            where = f"{where}{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.source = source


class InvariantViolation(AltGDAError):
    """A verified identity or bound failed beyond its tolerance."""


EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_INVARIANT = 4


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the CLI exit code."""
    if isinstance(error, ConfigError):
        return EXIT_CONFIG
    if isinstance(error, DivergenceError):
        return EXIT_DIVERGED
    if isinstance(error, InvariantViolation):
        return EXIT_INVARIANT
    return 1
