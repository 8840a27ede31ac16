# ABOUTME: Input validation for physical parameters and scenario names
# ABOUTME: Rejects non-finite values, out-of-range probabilities and unsafe preset names
"""Input validation utilities for qkdgain"""

import math
import re

from qkdgain.exceptions import ParameterDomainError, QkdGainError

__all__ = [
    "validate_scenario_name",
    "InvalidScenarioNameError",
    "VALID_NAME_PATTERN",
    "require_finite",
    "require_positive",
    "require_nonnegative",
    "require_probability",
    "require_open_probability",
    "require_efficiency",
]


class InvalidScenarioNameError(QkdGainError):
    """Raised when a scenario name is invalid"""

    pass


# Scenario names: alphanumeric, hyphens, underscores, spaces (as in "BT 8")
VALID_NAME_PATTERN = re.compile(r"^[a-zA-Z0-9_\- ]+$")


def validate_scenario_name(name: str) -> None:
    """Validate a scenario preset name

    Args:
        name: Preset name to validate

    Raises:
        InvalidScenarioNameError: If name is empty or contains other characters

    Examples:
        Valid: "BT8", "BT 13", "kth-15", "G13"
        Invalid: "../etc", "bt8;rm", ""
    """
    if not name.strip():
        raise InvalidScenarioNameError("Scenario name cannot be empty")

    if not VALID_NAME_PATTERN.match(name):
        raise InvalidScenarioNameError(
            f"Invalid scenario name: '{name}'\n\n"
            f"Scenario names must contain only letters, digits, hyphens, "
            f"underscores and spaces, e.g. BT8, KTH15"
        )


def require_finite(name: str, value: float) -> float:
    """Return value if finite, otherwise raise ParameterDomainError"""
    if not math.isfinite(value):
        raise ParameterDomainError(name, value, "a finite number")
    return value


def require_positive(name: str, value: float) -> float:
    """Return value if finite and > 0"""
    require_finite(name, value)
    if value <= 0:
        raise ParameterDomainError(name, value, "> 0")
    return value


def require_nonnegative(name: str, value: float) -> float:
    """Return value if finite and >= 0"""
    require_finite(name, value)
    if value < 0:
        raise ParameterDomainError(name, value, ">= 0")
    return value


def require_probability(name: str, value: float) -> float:
    """Return value if it lies in [0, 1]"""
    require_finite(name, value)
    if not 0.0 <= value <= 1.0:
        raise ParameterDomainError(name, value, "a probability in [0, 1]")
    return value


def require_open_probability(name: str, value: float) -> float:
    """Return value if it lies in [0, 1)"""
    require_finite(name, value)
    if not 0.0 <= value < 1.0:
        raise ParameterDomainError(name, value, "a probability in [0, 1)")
    return value


def require_efficiency(name: str, value: float) -> float:
    """Return value if it lies in (0, 1] (efficiencies)"""
    require_finite(name, value)
    if not 0.0 < value <= 1.0:
        raise ParameterDomainError(name, value, "an efficiency in (0, 1]")
    return value
