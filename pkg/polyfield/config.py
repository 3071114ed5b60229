"""
Configuration management for polyfield.

This module provides the ConfigurationManager singleton and the default
numerical settings used by the solver, the SOS compiler, the integrator and
the residual evaluators.
"""

import os
from typing import Any, Dict, Optional, Union

from dotenv import load_dotenv

from .types import PolyfieldConfig

# Default configuration values
DEFAULT_CONFIG = {
    "SOLVER": {
        "BACKEND": "cvxopt",
        "GAP_TOL": 1e-8,
        "FEAS_TOL": 1e-8,
        "MAX_ITERS": 200,
    },
    "SOS": {"MULTIPLIER_DEGREE": 2},
    "INTEGRATOR": {"STEP": 1e-3, "EXIT_TOL": 1e-9},
    "RESIDUAL": {"RESOLUTION": 50, "DELTA": 1e-5},
    "POLY": {"ZERO_TOL": 1e-14},
    "CONTROL": {"RESOLUTION": 101},
    "EXIT_CODES": {"OK": 0, "INFEASIBLE": 2, "SOLVER": 3, "CONFIG": 4},
}

_ENV_FIELDS = {
    "solver_backend": ("POLYFIELD_SOLVER_BACKEND", str),
    "gap_tol": ("POLYFIELD_GAP_TOL", float),
    "feas_tol": ("POLYFIELD_FEAS_TOL", float),
    "max_iters": ("POLYFIELD_MAX_ITERS", int),
    "multiplier_degree": ("POLYFIELD_MULTIPLIER_DEGREE", int),
    "integrator_step": ("POLYFIELD_INTEGRATOR_STEP", float),
    "residual_resolution": ("POLYFIELD_RESIDUAL_RESOLUTION", int),
    "residual_delta": ("POLYFIELD_RESIDUAL_DELTA", float),
}


class ConfigurationManager:
    """
    Singleton configuration manager for polyfield.

    Holds the numerical settings shared by every module. Library code reads
    them through ``current_config()``, which falls back to the defaults when
    nothing has been initialized.

    Examples:
        Basic usage:
        >>> config_manager = ConfigurationManager.get_instance()
        >>> config_manager.initialize({'gap_tol': 1e-9, 'max_iters': 300})
        >>> config = config_manager.get_config()

        Using environment variables:
        >>> config_manager = ConfigurationManager.get_instance()
        >>> config_manager.initialize_from_env()
    """

    _instance: Optional["ConfigurationManager"] = None
    _config: Optional[PolyfieldConfig] = None

    def __new__(cls):
        """Ensure singleton pattern."""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    @classmethod
    def get_instance(cls) -> "ConfigurationManager":
        """
        Get the singleton instance of ConfigurationManager.

        Returns:
            ConfigurationManager instance
        """
        if cls._instance is None:
            cls._instance = ConfigurationManager()
        return cls._instance

    def initialize(self, config_data: Union[Dict[str, Any], PolyfieldConfig]) -> None:
        """
        Initialize the configuration with the provided data.

        Missing keys take their values from DEFAULT_CONFIG.

        Args:
            config_data: Configuration dictionary or PolyfieldConfig object

        Examples:
            >>> config_manager = ConfigurationManager.get_instance()
            >>> config_manager.initialize({'integrator_step': 1e-2})
        """
        if isinstance(config_data, PolyfieldConfig):
            self._config = config_data
            return

        solver = DEFAULT_CONFIG["SOLVER"]
        self._config = PolyfieldConfig(
            solver_backend=config_data.get("solver_backend") or solver["BACKEND"],
            gap_tol=float(config_data.get("gap_tol", solver["GAP_TOL"])),
            feas_tol=float(config_data.get("feas_tol", solver["FEAS_TOL"])),
            max_iters=int(config_data.get("max_iters", solver["MAX_ITERS"])),
            multiplier_degree=int(
                config_data.get(
                    "multiplier_degree", DEFAULT_CONFIG["SOS"]["MULTIPLIER_DEGREE"]
                )
            ),
            integrator_step=float(
                config_data.get("integrator_step", DEFAULT_CONFIG["INTEGRATOR"]["STEP"])
            ),
            residual_resolution=int(
                config_data.get(
                    "residual_resolution", DEFAULT_CONFIG["RESIDUAL"]["RESOLUTION"]
                )
            ),
            residual_delta=float(
                config_data.get("residual_delta", DEFAULT_CONFIG["RESIDUAL"]["DELTA"])
            ),
            verbose=bool(config_data.get("verbose", False)),
        )

    def initialize_from_env(self) -> None:
        """
        Initialize configuration from environment variables.

        Reads a ``.env`` file when present, then every variable with the
        POLYFIELD_ prefix.

        Examples:
            >>> config_manager = ConfigurationManager.get_instance()
            >>> config_manager.initialize_from_env()
        """
        load_dotenv()
        config_data: Dict[str, Any] = {}
        for key, (env_name, cast) in _ENV_FIELDS.items():
            raw = os.getenv(env_name)
            if raw is not None and raw != "":
                config_data[key] = cast(raw)
        config_data["verbose"] = os.getenv("POLYFIELD_VERBOSE", "false").lower() == "true"

        self.initialize(config_data)

    def get_config(self) -> PolyfieldConfig:
        """
        Get the current configuration.

        Returns:
            Current PolyfieldConfig instance

        Raises:
            RuntimeError: If configuration is not initialized
        """
        if self._config is None:
            raise RuntimeError(
                "Configuration not initialized. Call initialize() first."
            )
        return self._config

    def set_config(self, config: PolyfieldConfig) -> None:
        """Set the configuration directly."""
        self._config = config

    def reset(self) -> None:
        """Reset the configuration to None."""
        self._config = None

    def update_config(self, updates: Dict[str, Any]) -> None:
        """
        Update the current configuration with new values.

        Args:
            updates: Dictionary of configuration updates

        Examples:
            >>> config_manager = ConfigurationManager.get_instance()
            >>> config_manager.update_config({'verbose': True})
        """
        if self._config is None:
            raise RuntimeError(
                "Configuration not initialized. Call initialize() first."
            )

        for key, value in updates.items():
            if hasattr(self._config, key):
                setattr(self._config, key, value)


def current_config() -> PolyfieldConfig:
    """
    Return the initialized configuration, or defaults when uninitialized.

    Returns:
        The active PolyfieldConfig
    """
    try:
        return ConfigurationManager.get_instance().get_config()
    except RuntimeError:
        return PolyfieldConfig()
