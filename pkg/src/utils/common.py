"""
Shared numerical helpers: compact-support profiles, verification norms,
convergence orders and timing.
"""

import math
import time
from typing import Any, Optional, Sequence

import numpy as np
from scipy import integrate


# ============================================================================
# Compact-Support Profiles
# ============================================================================

def bump(u: np.ndarray) -> np.ndarray:
    """Standard bump exp(1 - 1/(1 - u^2)) on |u| < 1, exactly zero elsewhere."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
    return out


_BUMP_MASS = integrate.quad(lambda s: float(bump(np.array(s))), -1.0, 1.0)[0]


def smoothstep(t: np.ndarray, t_lo: float, t_hi: float) -> np.ndarray:
    """
    Monotone profile equal to 0 for t <= t_lo and 1 for t >= t_hi.

    The transition is the normalized running integral of the bump, so both
    plateaus are exact.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t_hi <= t_lo:
        raise ValueError("smoothstep requires t_lo < t_hi")
    out = np.where(t >= t_hi, 1.0, 0.0)
    mid = (t > t_lo) & (t < t_hi)
    half = 0.5 * (t_hi - t_lo)
    centre = 0.5 * (t_hi + t_lo)
    for index in np.flatnonzero(mid):
        u = (t[index] - centre) / half
        out[index] = integrate.quad(lambda s: float(bump(np.array(s))), -1.0, u)[0] / _BUMP_MASS
    return out


def periodic_offset(x: np.ndarray, centre: float, period: float) -> np.ndarray:
    """Signed distance x - centre wrapped into [-period/2, period/2)."""
    return (np.asarray(x) - centre + 0.5 * period) % period - 0.5 * period


# ============================================================================
# Verification Norms
# ============================================================================

def interior_max(values: np.ndarray, margin: int = 2, time_axis: int = -2) -> float:
    """Max-norm of an array over time layers at least ``margin`` from both ends."""
    values = np.asarray(values)
    nt = values.shape[time_axis]
    if nt <= 2 * margin:
        raise ValueError(f"cannot strip {margin} layers from {nt} time samples")
    inner = np.take(values, np.arange(margin, nt - margin), axis=time_axis)
    return float(np.max(np.abs(inner))) if inner.size else 0.0


def observed_order(coarse: float, fine: float, ratio: float = 2.0) -> float:
    """Observed convergence order between two resolutions."""
    if fine == 0.0:
        return math.inf if coarse > 0.0 else 0.0
    if coarse == 0.0:
        return 0.0
    return math.log(coarse / fine) / math.log(ratio)


def relative_gap(a: complex, b: complex, scale: Optional[float] = None) -> float:
    """|a - b| relative to a scale (defaults to max(|a|, |b|, 1e-300))."""
    if scale is None:
        scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / scale


def max_abs(*arrays: Sequence[Any]) -> float:
    """Largest magnitude over a collection of arrays."""
    return max((float(np.max(np.abs(a))) if np.size(a) else 0.0) for a in arrays)


# ============================================================================
# Timing Utilities
# ============================================================================

class Timer:
    """Simple timer for measuring elapsed time."""

    def __init__(self):
        self.start_time = time.perf_counter()
        self.last_time = self.start_time

    def reset(self) -> None:
        """Reset the timer."""
        self.start_time = time.perf_counter()
        self.last_time = self.start_time

    def elapsed(self) -> float:
        """Get total elapsed time since timer creation/reset."""
        return time.perf_counter() - self.start_time

    def lap(self) -> float:
        """Get time since last lap call."""
        current_time = time.perf_counter()
        lap_time = current_time - self.last_time
        self.last_time = current_time
        return lap_time


def format_time(seconds: float) -> str:
    """Format seconds as a short human-readable string."""
    if seconds < 1.0:
        return f"{seconds * 1000:.1f}ms"
    if seconds < 60.0:
        return f"{seconds:.2f}s"
    minutes = int(seconds // 60)
    return f"{minutes}m{seconds - 60 * minutes:.1f}s"
