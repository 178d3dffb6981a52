"""
Utility functions and classes for the linearized-gravity workbench
"""

from .config import (
    Config, ConfigManager, config_manager, get_tolerances,
    GridConfig, BackgroundConfig, ToleranceConfig, SuiteConfig, LoggingConfig,
    SUITE_NAMES,
)
from .logging_config import (
    LinGravLogger, get_logger, setup_logging_from_config,
    log_function_entry, log_performance,
)
from .errors import (
    WorkbenchError, GridError, SupportError, ContractError, UnsupportedBackgroundError,
    EvolutionError, ResourceError, GeometryError, UsageError,
)
from .common import (
    bump, smoothstep, periodic_offset,
    interior_max, observed_order, relative_gap, max_abs,
    Timer, format_time,
)

__all__ = [
    # Configuration
    "Config", "ConfigManager", "config_manager", "get_tolerances",
    "GridConfig", "BackgroundConfig", "ToleranceConfig", "SuiteConfig", "LoggingConfig",
    "SUITE_NAMES",

    # Logging
    "LinGravLogger", "get_logger", "setup_logging_from_config",
    "log_function_entry", "log_performance",

    # Errors
    "WorkbenchError", "GridError", "SupportError", "ContractError",
    "UnsupportedBackgroundError", "EvolutionError", "ResourceError",
    "GeometryError", "UsageError",

    # Numerics
    "bump", "smoothstep", "periodic_offset",
    "interior_max", "observed_order", "relative_gap", "max_abs",

    # Timing
    "Timer", "format_time",
]
