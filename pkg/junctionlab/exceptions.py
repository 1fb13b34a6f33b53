"""Various exceptions used."""

from typing import Any


class DimensionMismatchError(Exception):
    pass


class UnitError(Exception):
    pass


class DegenerateProfileError(Exception):
    pass


class QuadratureFailureError(Exception):
    pass


class NonNormalizableError(Exception):
    pass


class InsufficientDataError(Exception):
    pass


class OutOfRangeError(Exception):
    pass


class AnchorOutOfRangeError(Exception):
    pass


class TooFewSamplesError(Exception):
    pass


class PeakNotFoundError(Exception):
    pass


class ParseError(Exception):
    """A data or config file could not be parsed."""

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None) -> None:
        """Attach the 1-based line and column of the offending token, if known."""
        location = ""
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column {column}"
            location += ": "
        super().__init__(location + message)
        self.line = line
        self.column = column


class ConfigError(Exception):
    """A run configuration key is unknown or holds an invalid value."""

    def __init__(self, key: str, message: str) -> None:
        """Name the key in the message."""
        super().__init__(f"{key}: {message}")
        self.key = key


class ModelEvaluationError(Exception):
    """The forward model failed at a parameter point."""

    def __init__(self, point: dict[str, float], cause: Exception) -> None:
        """Keep the parameter point for diagnostics."""
        super().__init__(f"Model evaluation failed at {point}: {cause}")
        self.point = point
        self.cause = cause

    def __reduce__(self) -> tuple:
        return (type(self), (self.point, self.cause))


class SweepPointError(Exception):
    """A temperature sweep failed at one of its points."""

    def __init__(self, temperature: float, cause: Exception) -> None:
        """Keep the failing temperature (K)."""
        super().__init__(f"Sweep failed at T = {temperature * 1e3:g} mK: {cause}")
        self.temperature = temperature
        self.cause = cause

    def __reduce__(self) -> tuple:
        return (type(self), (self.temperature, self.cause))


class BudgetExhaustedError(Exception):
    """A fit ran out of evaluations before converging."""

    def __init__(self, result: Any) -> None:  # noqa: ANN401
        """Keep the best-so-far result."""
        super().__init__(f"Evaluation budget exhausted after {result.evaluations} model evaluations.")
        self.result = result

    def __reduce__(self) -> tuple:
        return (type(self), (self.result,))
