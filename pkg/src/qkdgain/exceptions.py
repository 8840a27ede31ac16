# ABOUTME: Custom exception hierarchy for qkdgain
# ABOUTME: Provides specific exception types for parameter, numeric and scenario failures
"""Custom exceptions for qkdgain"""

__all__ = [
    "QkdGainError",
    "ParameterDomainError",
    "DegenerateSourceError",
    "NoClicksError",
    "RootFindingError",
    "NumericalError",
    "InvalidSweepConfigError",
    "ScenarioNotFoundError",
    "InvalidScenarioError",
]


class QkdGainError(Exception):
    """Base exception for all qkdgain errors"""

    pass


class ParameterDomainError(QkdGainError):
    """Raised when a physical parameter is non-finite or outside its range"""

    def __init__(self, name: str, value: float | str, expected: str):
        self.name = name
        self.value = value
        self.expected = expected
        super().__init__(f"Parameter '{name}' = {value!r} is invalid (expected {expected})")


class DegenerateSourceError(QkdGainError):
    """Raised when a source never passes Alice's post-selection"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Degenerate source: post-selection probability is zero ({reason})")


class NoClicksError(QkdGainError):
    """Raised when Bob's detection unit never clicks, so the gain is undefined"""

    def __init__(self) -> None:
        super().__init__(
            "Expected click probability p_exp is zero; the gain is undefined. "
            "Check transmission, detector efficiency and dark counts."
        )


class RootFindingError(QkdGainError):
    """Raised when an optimality condition has no sign change in its bracket"""

    def __init__(self, equation: str, lo: float, hi: float):
        self.equation = equation
        self.lo = lo
        self.hi = hi
        super().__init__(f"No sign change for {equation} in bracket [{lo:.6g}, {hi:.6g}]")


class NumericalError(QkdGainError):
    """Raised when a linear-algebra or numeric routine fails"""

    def __init__(self, operation: str, reason: str):
        self.operation = operation
        self.reason = reason
        super().__init__(f"Numerical failure in {operation}: {reason}")


class InvalidSweepConfigError(QkdGainError):
    """Raised when a sweep or optimization configuration is unusable"""

    pass


class ScenarioNotFoundError(QkdGainError):
    """Raised when a scenario preset or file does not exist"""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Scenario '{name}' does not exist")


class InvalidScenarioError(QkdGainError):
    """Raised when a scenario file contains an unknown key or a bad value"""

    pass
