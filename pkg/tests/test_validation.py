import math

import pytest

from qkdgain.exceptions import ParameterDomainError
from qkdgain.validation import (
    InvalidScenarioNameError,
    require_efficiency,
    require_finite,
    require_nonnegative,
    require_open_probability,
    require_positive,
    require_probability,
    validate_scenario_name,
)


def test_valid_scenario_names():
    """Test that valid names pass validation"""
    valid_names = [
        "BT8",
        "BT 13",
        "kth-15",
        "G_13",
        "a",  # Single character
        "very-long-scenario-name-with-many-parts",
    ]

    for name in valid_names:
        # Should not raise
        validate_scenario_name(name)


def test_invalid_characters_rejected():
    """Test that invalid characters are rejected"""
    invalid_names = [
        "../etc",
        "scenario/with/slash",
        "scenario\\with\\backslash",
        "bt8;rm",
        "bt@8",
        ".hidden",
        "bt8.",
    ]

    for name in invalid_names:
        with pytest.raises(InvalidScenarioNameError) as exc_info:
            validate_scenario_name(name)

        error_msg = str(exc_info.value)
        assert name in error_msg
        assert "invalid" in error_msg.lower()


def test_empty_name_rejected():
    """Test that empty and blank names are rejected"""
    with pytest.raises(InvalidScenarioNameError):
        validate_scenario_name("")
    with pytest.raises(InvalidScenarioNameError):
        validate_scenario_name("   ")


def test_error_message_includes_examples():
    """Test that error message explains valid names"""
    with pytest.raises(InvalidScenarioNameError) as exc_info:
        validate_scenario_name("bt$8")

    assert "BT8" in str(exc_info.value)


def test_require_helpers_return_valid_values():
    """Test that in-range values are returned unchanged"""
    assert require_finite("x", -3.5) == -3.5
    assert require_positive("mu", 0.1) == 0.1
    assert require_nonnegative("length", 0.0) == 0.0
    assert require_probability("e", 1.0) == 1.0
    assert require_open_probability("dark", 0.0) == 0.0
    assert require_efficiency("eta", 1.0) == 1.0


def test_non_finite_values_rejected():
    """Test that NaN and infinities are rejected by every helper"""
    helpers = [
        require_finite,
        require_positive,
        require_nonnegative,
        require_probability,
        require_open_probability,
        require_efficiency,
    ]

    for helper in helpers:
        for value in (math.nan, math.inf, -math.inf):
            with pytest.raises(ParameterDomainError):
                helper("x", value)


def test_range_boundaries():
    """Test the open and closed ends of each range"""
    with pytest.raises(ParameterDomainError):
        require_positive("mu", 0.0)
    with pytest.raises(ParameterDomainError):
        require_nonnegative("length", -1e-12)
    with pytest.raises(ParameterDomainError):
        require_probability("e", 1.0000001)
    with pytest.raises(ParameterDomainError):
        require_open_probability("dark", 1.0)
    with pytest.raises(ParameterDomainError):
        require_efficiency("eta", 0.0)


def test_domain_error_names_the_parameter():
    """Test that the raised error carries the parameter name"""
    with pytest.raises(ParameterDomainError) as exc_info:
        require_efficiency("eta_b", 1.5)

    assert exc_info.value.name == "eta_b"
    assert "eta_b" in str(exc_info.value)
