from typer.testing import CliRunner

from qkdgain.cli import cli


def test_rate_rejects_invalid_scenario_names():
    """Test that rate rejects path-like scenario names that are not files"""
    runner = CliRunner()

    for name in ["../no-such-preset", "bt8;rm", "presets/BT8"]:
        result = runner.invoke(cli, ["rate", "--scenario", name])
        assert result.exit_code == 2
        assert "Invalid scenario name" in result.output


def test_sweep_rejects_invalid_scenario_names():
    """Test that sweep rejects invalid scenario names"""
    runner = CliRunner()

    result = runner.invoke(cli, ["sweep", "--scenario", "../evil"])
    assert result.exit_code == 2
    assert "Invalid scenario name" in result.output


def test_bounds_rejects_empty_scenario_name():
    """Test that bounds rejects a blank scenario name"""
    runner = CliRunner()

    result = runner.invoke(cli, ["bounds", "--scenario", "  "])
    assert result.exit_code == 2
    assert "cannot be empty" in result.output
