"""
Configuration Management for interfem

This module provides the numerical defaults shared by the mesh generator,
the assemblers, the Krylov solvers and the analysis estimators. Defaults can
be overridden from environment variables (optionally read from a .env file)
or from a JSON file.
"""

import os
from typing import Optional, Dict, Any
from dataclasses import dataclass, fields
from pathlib import Path
import json
import logging

from dotenv import load_dotenv

from .exceptions import SerializationError

logger = logging.getLogger(__name__)


@dataclass
class SolverConfig:
    """Main configuration class for interfem."""

    # Linear algebra
    tol_lin: float = 1e-10
    tol_compat: float = 1e-10
    max_iter_factor: int = 10
    linear_solver: str = "cg"

    # Geometry
    tol_geom_factor: float = 1e-10

    # Meshing
    min_angle: float = 20.0
    mesh_quality_angle: float = 28.0
    mesh_retries: int = 3

    # Quadrature
    volume_quadrature_p1: int = 4
    volume_quadrature_p2: int = 6
    line_quadrature_points: int = 4
    curve_panels: int = 256

    # Analysis
    holder_pairs: int = 10_000
    seed: int = 1234

    # Concurrency
    max_workers: int = 4

    # Orientation
    orientation_self_test: bool = True

    # Logging Configuration
    log_level: str = "WARNING"
    log_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    def __post_init__(self):
        """Post-initialization setup."""
        self._load_environment_variables()
        self._setup_logging()

    def _load_environment_variables(self):
        """Load configuration from environment variables."""
        load_dotenv(override=False)
        env_mapping = {
            'INTERFEM_LOG_LEVEL': 'log_level',
            'INTERFEM_TOL_LIN': 'tol_lin',
            'INTERFEM_LINEAR_SOLVER': 'linear_solver',
            'INTERFEM_MAX_WORKERS': 'max_workers',
            'INTERFEM_SEED': 'seed',
        }

        for env_var, attr_name in env_mapping.items():
            value = os.getenv(env_var)
            if value is not None:
                if attr_name in ('max_workers', 'seed'):
                    setattr(self, attr_name, int(value))
                elif attr_name == 'tol_lin':
                    setattr(self, attr_name, float(value))
                else:
                    setattr(self, attr_name, value)

    def _setup_logging(self):
        """Configure the package logger level."""
        logging.getLogger("interfem").setLevel(getattr(logging, self.log_level.upper(), logging.WARNING))

    def quadrature_degree(self, order: int) -> int:
        """Volume quadrature degree for a basis order."""
        return self.volume_quadrature_p1 if order == 1 else self.volume_quadrature_p2

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def save_to_file(self, file_path: str) -> None:
        """Save configuration to a JSON file."""
        try:
            with open(file_path, 'w') as f:
                json.dump(self.to_dict(), f, indent=2)
        except OSError as e:
            raise SerializationError(f"Cannot write configuration to {file_path}: {e}")
        logger.info(f"Configuration saved to {file_path}")

    @classmethod
    def load_from_file(cls, file_path: str) -> 'SolverConfig':
        """Load configuration from a JSON file."""
        if not os.path.exists(file_path):
            logger.warning(f"Configuration file {file_path} not found, using defaults")
            return cls()

        try:
            with open(file_path, 'r') as f:
                config_data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise SerializationError(f"Error loading configuration from {file_path}: {e}")

        config = cls()
        for key, value in config_data.items():
            if hasattr(config, key):
                setattr(config, key, value)
        logger.info(f"Configuration loaded from {file_path}")
        return config

    @classmethod
    def get_default_config_path(cls) -> Optional[str]:
        """Path of an optional user configuration file."""
        path = os.getenv("INTERFEM_CONFIG")
        if path:
            return path
        candidate = Path.home() / ".interfem" / "config.json"
        return str(candidate) if candidate.exists() else None


# Global configuration instance
_config: Optional[SolverConfig] = None


def get_config() -> SolverConfig:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        default_path = SolverConfig.get_default_config_path()
        _config = SolverConfig.load_from_file(default_path) if default_path else SolverConfig()
    return _config


def set_config(config: SolverConfig) -> None:
    """Set the global configuration instance."""
    global _config
    _config = config


def reset_config() -> None:
    """Reset the global configuration to defaults."""
    global _config
    _config = None
