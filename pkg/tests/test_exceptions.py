from qkdgain.exceptions import (
    DegenerateSourceError,
    InvalidScenarioError,
    InvalidSweepConfigError,
    NoClicksError,
    NumericalError,
    ParameterDomainError,
    QkdGainError,
    RootFindingError,
    ScenarioNotFoundError,
)


def test_qkdgain_error_is_base_exception():
    """Test that QkdGainError is the base exception"""
    err = QkdGainError("test message")
    assert str(err) == "test message"
    assert isinstance(err, Exception)


def test_parameter_domain_error():
    """Test ParameterDomainError keeps the parameter, value and expected range"""
    err = ParameterDomainError("mu", -0.1, "> 0")
    assert err.name == "mu"
    assert err.value == -0.1
    assert "mu" in str(err)
    assert "-0.1" in str(err)
    assert "> 0" in str(err)
    assert isinstance(err, QkdGainError)


def test_degenerate_source_error():
    """Test DegenerateSourceError mentions post-selection and the reason"""
    err = DegenerateSourceError("eta_a=0, dark_a=0")
    assert "post-selection" in str(err)
    assert "eta_a=0" in str(err)
    assert isinstance(err, QkdGainError)


def test_no_clicks_error():
    """Test NoClicksError message"""
    err = NoClicksError()
    assert "p_exp" in str(err)
    assert "undefined" in str(err).lower()
    assert isinstance(err, QkdGainError)


def test_root_finding_error():
    """Test RootFindingError with equation and bracket"""
    err = RootFindingError("optimality cubic", 0.0, 1.0)
    assert "optimality cubic" in str(err)
    assert err.lo == 0.0
    assert err.hi == 1.0
    assert "sign change" in str(err)
    assert isinstance(err, QkdGainError)


def test_numerical_error():
    """Test NumericalError with operation details"""
    err = NumericalError("eigendecomposition", "did not converge")
    assert "eigendecomposition" in str(err)
    assert "did not converge" in str(err)
    assert isinstance(err, QkdGainError)


def test_invalid_sweep_config_error():
    """Test InvalidSweepConfigError with custom message"""
    err = InvalidSweepConfigError("Distances must be strictly increasing")
    assert "increasing" in str(err)
    assert isinstance(err, QkdGainError)


def test_scenario_not_found_error():
    """Test ScenarioNotFoundError with scenario name"""
    err = ScenarioNotFoundError("BT99")
    assert "BT99" in str(err)
    assert err.name == "BT99"
    assert isinstance(err, QkdGainError)


def test_invalid_scenario_error():
    """Test InvalidScenarioError inherits from QkdGainError"""
    err = InvalidScenarioError("scenario.txt:3: unknown key 'lenght'")
    assert "lenght" in str(err)
    assert isinstance(err, QkdGainError)
