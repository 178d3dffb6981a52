"""
Configuration Management for the linearized-gravity workbench.

Sections mirror the concerns of a verification run: the grid, the background
chart, numerical tolerances, the suite runner and logging.
"""

import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import yaml

SUITE_NAMES = ("identities", "gauges", "greens", "symplectic", "adm", "algebra")
BACKGROUND_KINDS = ("minkowski", "desitter")
OUTPUT_FORMATS = ("json", "csv")


@dataclass
class GridConfig:
    """Configuration for the periodic (t, x) grid."""
    nx: int = 64
    nt: int = 256
    L: float = 2.0 * math.pi


@dataclass
class BackgroundConfig:
    """Configuration for the background chart."""
    kind: str = "minkowski"
    H: float = 1.0
    minkowski_t: List[float] = field(default_factory=lambda: [0.0, 2.0])
    desitter_eta: List[float] = field(default_factory=lambda: [-2.2, -0.2])

    def time_range(self) -> List[float]:
        """Coordinate time range for the configured chart."""
        return list(self.desitter_eta if self.kind == "desitter" else self.minkowski_t)


@dataclass
class ToleranceConfig:
    """Numerical thresholds used by preconditions and verification checks."""
    floor_factor: float = 10.0
    support_threshold: float = 1e-12
    prune_threshold: float = 1e-14
    divergence_ratio: float = 0.1
    null_ratio: float = 1e-2
    min_order: float = 1.8
    min_order_nested: float = 1.5
    oracle_max_unknowns: int = 20000
    boundary_margin: int = 2


@dataclass
class SuiteConfig:
    """Configuration for verification suite runs."""
    seed: int = 1
    suites: List[str] = field(default_factory=lambda: list(SUITE_NAMES))
    output_format: str = "json"
    output_path: Optional[str] = None
    threads: int = 1

    def effective_threads(self) -> int:
        """Worker count, overridden by the LINGRAV_THREADS environment variable."""
        override = os.environ.get("LINGRAV_THREADS")
        if override is None or not override.strip():
            return self.threads
        try:
            value = int(override)
        except ValueError:
            raise ValueError(f"LINGRAV_THREADS must be an integer, got {override!r}") from None
        if value <= 0:
            raise ValueError(f"LINGRAV_THREADS must be positive, got {value}")
        return value


@dataclass
class LoggingConfig:
    """Configuration for logging parameters."""
    level: str = "INFO"
    file: bool = False
    console: bool = True
    directory: str = "logs"


@dataclass
class Config:
    """Main configuration class containing all sub-configurations."""
    grid: GridConfig = field(default_factory=GridConfig)
    background: BackgroundConfig = field(default_factory=BackgroundConfig)
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    suite: SuiteConfig = field(default_factory=SuiteConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    @classmethod
    def load_from_file(cls, config_path: str) -> 'Config':
        """Load configuration from YAML file."""
        if not os.path.exists(config_path):
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        with open(config_path, 'r') as file:
            config_data = yaml.safe_load(file)

        return cls.from_dict(config_data or {})

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> 'Config':
        """Create configuration from dictionary."""
        config = cls()

        if 'grid' in config_dict:
            config.grid = GridConfig(**config_dict['grid'])

        if 'background' in config_dict:
            config.background = BackgroundConfig(**config_dict['background'])

        if 'tolerances' in config_dict:
            config.tolerances = ToleranceConfig(**config_dict['tolerances'])

        if 'suite' in config_dict:
            config.suite = SuiteConfig(**config_dict['suite'])

        if 'logging' in config_dict:
            config.logging = LoggingConfig(**config_dict['logging'])

        return config

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            'grid': dict(self.grid.__dict__),
            'background': dict(self.background.__dict__),
            'tolerances': dict(self.tolerances.__dict__),
            'suite': dict(self.suite.__dict__),
            'logging': dict(self.logging.__dict__),
        }

    def save_to_file(self, config_path: str) -> None:
        """Save configuration to YAML file."""
        directory = os.path.dirname(config_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with open(config_path, 'w') as file:
            yaml.dump(self.to_dict(), file, default_flow_style=False, indent=2)

    def validate(self) -> bool:
        """Validate configuration values."""
        errors = []

        # Grid validation
        if self.grid.nx <= 0:
            errors.append("nx must be positive")
        if self.grid.nt < 5:
            errors.append("nt must be at least 5")
        if self.grid.L <= 0:
            errors.append("L must be positive")

        # Background validation
        if self.background.kind not in BACKGROUND_KINDS:
            errors.append(f"background kind must be one of {BACKGROUND_KINDS}")
        if self.background.H <= 0:
            errors.append("H must be positive")
        t0, t1 = self.background.time_range()
        if t1 <= t0:
            errors.append("time range must be increasing")
        if self.background.kind == "desitter" and t1 >= 0:
            errors.append("de Sitter conformal time range must end below zero")

        # Tolerance validation
        if self.tolerances.floor_factor < 1:
            errors.append("floor_factor must be at least 1")
        if self.tolerances.support_threshold <= 0:
            errors.append("support_threshold must be positive")
        if not 0 < self.tolerances.divergence_ratio < 1:
            errors.append("divergence_ratio must lie in (0, 1)")
        if not 0 < self.tolerances.null_ratio < 1:
            errors.append("null_ratio must lie in (0, 1)")
        if self.tolerances.oracle_max_unknowns <= 0:
            errors.append("oracle_max_unknowns must be positive")
        if self.tolerances.boundary_margin < 2:
            errors.append("boundary_margin must be at least 2")

        # Suite validation
        if not self.suite.suites:
            errors.append("at least one suite must be selected")
        unknown = [name for name in self.suite.suites if name not in SUITE_NAMES]
        if unknown:
            errors.append(f"unknown suites: {', '.join(unknown)}")
        if self.suite.output_format not in OUTPUT_FORMATS:
            errors.append(f"output_format must be one of {OUTPUT_FORMATS}")
        if self.suite.threads <= 0:
            errors.append("threads must be positive")

        if errors:
            raise ValueError(f"Configuration validation failed: {'; '.join(errors)}")

        return True


class ConfigManager:
    """Singleton configuration manager."""

    _instance: Optional['ConfigManager'] = None
    _config: Optional[Config] = None

    def __new__(cls) -> 'ConfigManager':
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def load_config(self, config_path: str = "config/default.yaml") -> Config:
        """Load configuration from file, falling back to defaults."""
        try:
            self._config = Config.load_from_file(config_path)
            self._config.validate()
            return self._config
        except FileNotFoundError:
            from src.utils.logging_config import get_logger
            get_logger(__name__).warning(f"⚠️ Config file {config_path} not found, using defaults")
            self._config = Config()
            return self._config

    def get_config(self) -> Config:
        """Get current configuration."""
        if self._config is None:
            self._config = self.load_config()
        return self._config

    def reload_config(self, config_path: str = "config/default.yaml") -> Config:
        """Reload configuration from file."""
        return self.load_config(config_path)


# Global configuration manager instance
config_manager = ConfigManager()


def get_tolerances() -> ToleranceConfig:
    """Tolerances of the active configuration."""
    return config_manager.get_config().tolerances
