"""
Error types for the linearized-gravity workbench.

Every error carries a machine-readable ``error_code`` and a ``context`` dict of
the measured quantities that triggered it (norms, indices, limits), so that
suite reports and CLI output can serialize failures without parsing messages.
"""

from datetime import datetime
from typing import Any, Dict


class WorkbenchError(Exception):
    """Base class for all workbench errors."""

    def __init__(self, message: str, error_code: str = "WORKBENCH_ERROR", **context: Any):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.context: Dict[str, Any] = context
        self.timestamp = datetime.now()

    def to_dict(self) -> Dict[str, Any]:
        """Convert error to dictionary for reports."""
        return {
            'error_code': self.error_code,
            'message': self.message,
            'context': {key: _plain(value) for key, value in self.context.items()},
            'timestamp': self.timestamp.isoformat(),
        }


class GridError(WorkbenchError, ValueError):
    """Invalid grid or background construction (CFL, chart range)."""

    def __init__(self, message: str, constraint: str, **context: Any):
        super().__init__(message, error_code="GRID_ERROR", constraint=constraint, **context)
        self.constraint = constraint


class SupportError(WorkbenchError, ValueError):
    """A field's support touches a temporal boundary or leaves the grid interior."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message, error_code="SUPPORT_ERROR", **context)


class ContractError(WorkbenchError):
    """A precondition of an operation is violated by the measured input."""

    def __init__(self, message: str, measured: float = float('nan'),
                 tolerance: float = float('nan'), **context: Any):
        super().__init__(message, error_code="CONTRACT_ERROR",
                         measured=measured, tolerance=tolerance, **context)
        self.measured = measured
        self.tolerance = tolerance


class UnsupportedBackgroundError(WorkbenchError):
    """The operation is not defined on the requested background chart."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message, error_code="UNSUPPORTED_BACKGROUND", **context)


class EvolutionError(WorkbenchError):
    """Time stepping cannot proceed (CFL violation, singular level matrix)."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message, error_code="EVOLUTION_ERROR", **context)


class ResourceError(WorkbenchError):
    """A dense computation exceeds its configured size limit."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message, error_code="RESOURCE_ERROR", **context)


class GeometryError(WorkbenchError):
    """Degenerate geometry: non-positive-definite metric or too thin a window."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message, error_code="GEOMETRY_ERROR", **context)


class UsageError(WorkbenchError):
    """Invalid command-line or suite request."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message, error_code="USAGE_ERROR", **context)


def _plain(value: Any) -> Any:
    if hasattr(value, 'item') and getattr(value, 'ndim', 1) == 0:
        return value.item()
    if isinstance(value, tuple):
        return list(value)
    return value
