"""
Residual norms and the truncation floor used by "is a solution" checks.
"""

import threading
from typing import Dict

import numpy as np

from src.background.spacetime import Background
from src.fields.calculus import trace
from src.fields.synthesis import PlaneWaveRecipe, synthesize_field
from src.fields.tensors import SymField2
from src.linop.operators import de_donder_vector, lichnerowicz, linearized_einstein
from src.utils.common import interior_max
from src.utils.config import get_tolerances
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

_FLOOR_MODE = 3
_floor_cache: Dict[tuple, float] = {}
_floor_lock = threading.Lock()


def _cache_key(bg: Background) -> tuple:
    grid = bg.grid
    return (bg.spec.kind.value, bg.spec.H, grid.nt, grid.nx, grid.t0, grid.t1, grid.L)


def truncation_floor(bg: Background) -> float:
    """
    Relative interior residual of P applied to an exact plane wave.

    This is the discretization error of a smooth, known solution on the
    current grid; thresholds for accepting discrete solutions scale from it.
    """
    key = _cache_key(bg)
    with _floor_lock:
        cached = _floor_cache.get(key)
    if cached is not None:
        return cached
    mode = min(_FLOOR_MODE, max(1, bg.grid.nx // 8))
    wave = synthesize_field(bg, PlaneWaveRecipe(mode=mode))
    residual = interior_max(lichnerowicz(bg, wave).components)
    floor = max(residual / max(wave.norm(), 1e-300), np.finfo(float).eps)
    with _floor_lock:
        floor = _floor_cache.setdefault(key, floor)
    logger.debug(f"📏 Truncation floor {floor:.3e} on {bg.grid.nt}x{bg.grid.nx}")
    return floor


def solution_tolerance(bg: Background, scale: float) -> float:
    """floor_factor x truncation floor x field scale."""
    return get_tolerances().floor_factor * truncation_floor(bg) * max(scale, 1e-300)


def de_donder_residual(bg: Background, gamma: SymField2, margin: int = 2) -> float:
    """Interior max-norm of nabla . gamma_bar."""
    return interior_max(de_donder_vector(bg, gamma).data, margin)


def field_equation_residual(bg: Background, gamma: SymField2, margin: int = 2) -> float:
    """Interior max-norm of L(gamma)."""
    return interior_max(linearized_einstein(bg, gamma).components, margin)


def trace_residual(bg: Background, gamma: SymField2, margin: int = 2) -> float:
    return interior_max(trace(bg, gamma).data, margin)
