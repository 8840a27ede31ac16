# ABOUTME: Configuration management for qkdgain
# ABOUTME: Loads optimizer and output settings from environment variables and an rc file
"""Configuration management for qkdgain"""

import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

import psutil

__all__ = [
    "Config",
    "load_config",
    "get_config",
    "default_workers",
    "_reset_config_for_testing",
]


DEFAULT_LOG_LEVEL = "INFO"
DEFAULT_MU_MIN = 1e-6
DEFAULT_MU_MAX = 2.0
DEFAULT_PRESCAN_POINTS = 64
DEFAULT_EC_MODE = "table"
DEFAULT_CSV_DIGITS = 10
RC_FILE_NAME = ".qkdgainrc"
ENV_PREFIX = "QKDGAIN_"

EC_MODES = ("shannon", "table")
SETTING_KEYS = (
    "log_level",
    "workers",
    "mu_min",
    "mu_max",
    "prescan_points",
    "ec_mode",
    "csv_digits",
)


def default_workers() -> int:
    """Number of sweep workers to use when none is configured

    Returns:
        Physical core count, or 1 when psutil cannot determine it
    """
    try:
        count = psutil.cpu_count(logical=False)
    except (OSError, RuntimeError):
        count = None
    return max(1, count or 1)


@dataclass
class Config:
    """Configuration for qkdgain operations"""

    log_level: str = DEFAULT_LOG_LEVEL

    # Sweep points evaluated concurrently
    workers: int = field(default_factory=default_workers)

    # Mean photon number search bracket
    mu_min: float = DEFAULT_MU_MIN
    mu_max: float = DEFAULT_MU_MAX
    prescan_points: int = DEFAULT_PRESCAN_POINTS

    ec_mode: str = DEFAULT_EC_MODE
    csv_digits: int = DEFAULT_CSV_DIGITS


def _apply_setting(config: Config, key: str, value: str) -> None:
    """Apply one key/value pair; malformed values leave the current setting"""
    try:
        if key == "log_level":
            config.log_level = value.upper()
        elif key == "workers":
            config.workers = max(1, int(value))
        elif key == "mu_min":
            config.mu_min = float(value)
        elif key == "mu_max":
            config.mu_max = float(value)
        elif key == "prescan_points":
            config.prescan_points = max(3, int(value))
        elif key == "ec_mode":
            if value.lower() in EC_MODES:
                config.ec_mode = value.lower()
        elif key == "csv_digits":
            config.csv_digits = max(1, int(value))
    except ValueError:
        pass  # Use default


def load_config(config_file: Path | None = None) -> Config:
    """Load configuration from environment and optional config file

    Args:
        config_file: Optional path to config file

    Returns:
        Config object with merged settings

    Configuration precedence (highest to lowest):
        1. Environment variables (QKDGAIN_*)
        2. Config file (~/.qkdgainrc or specified file)
        3. Defaults

    Config file format (~/.qkdgainrc):
        mu_max = 1.5
        workers = 4
        ec_mode = shannon
    """
    config = Config()

    if config_file is None:
        config_file = Path.home() / RC_FILE_NAME

    if config_file.exists():
        try:
            for line in config_file.read_text().splitlines():
                line = line.strip()
                if not line or line.startswith("#") or "=" not in line:
                    continue
                key, value = line.split("=", 1)
                _apply_setting(config, key.strip(), value.strip())
        except (OSError, UnicodeDecodeError):
            # Logging is configured from this object, so nothing is logged here
            pass

    for key in SETTING_KEYS:
        env_name = f"{ENV_PREFIX}{key.upper()}"
        if env_name in os.environ:
            _apply_setting(config, key, os.environ[env_name])

    return config


_config: Config | None = None
_config_lock = threading.Lock()


def get_config() -> Config:
    """Get global config instance (thread-safe singleton)

    Returns:
        Global Config instance
    """
    global _config

    if _config is not None:
        return _config

    with _config_lock:
        if _config is None:
            _config = load_config()
        return _config


def _reset_config_for_testing() -> None:
    """Reset config singleton for testing

    Warning:
        Not thread-safe during reset. Only call from test fixtures.
    """
    global _config
    _config = None
