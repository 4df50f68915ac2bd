"""
Configuration settings for the zeta computations.
Uses environment variables (optionally from a project-root .env file).
"""
import os
import logging

from dotenv import load_dotenv

from src.errors import ConfigError

logger = logging.getLogger(__name__)

ENV_PATH = os.path.join(os.path.dirname(os.path.dirname(__file__)), '.env')


def _int_setting(name, default, minimum=1):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}",
                          reason="config", details={"variable": name, "value": raw})
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}",
                          reason="config", details={"variable": name, "value": value})
    return value


class Config:
    def __init__(self, load_env=True):
        """Read settings from the environment, loading .env first if present"""
        if load_env and os.path.exists(ENV_PATH):
            load_dotenv(ENV_PATH, override=False)
            logger.debug("Loaded environment from %s", ENV_PATH)

        # Parallelism cap for quadrature and corpus sweeps
        self.THREADS = _int_setting("QWZETA_THREADS", os.cpu_count() or 1)

        # Default torus grid per dimension
        self.GRID = _int_setting("QWZETA_GRID", 64)

        self.SEED = _int_setting("QWZETA_SEED", 2024, minimum=0)
        self.LOG_LEVEL = os.getenv("QWZETA_LOG_LEVEL", "WARNING").upper()
        self.RESULTS_DIR = os.getenv("QWZETA_RESULTS_DIR", "tmp")

        if not isinstance(logging.getLevelName(self.LOG_LEVEL), int):
            raise ConfigError(f"Unknown log level {self.LOG_LEVEL!r}",
                              reason="config",
                              details={"variable": "QWZETA_LOG_LEVEL", "value": self.LOG_LEVEL})

    def __repr__(self):
        return (f"Config(THREADS={self.THREADS}, GRID={self.GRID}, SEED={self.SEED}, "
                f"LOG_LEVEL={self.LOG_LEVEL!r}, RESULTS_DIR={self.RESULTS_DIR!r})")
