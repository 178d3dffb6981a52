"""
Analytic cosmological vacuum backgrounds on a symmetry-reduced periodic grid.
"""

from .grid import Grid, CFL_LIMIT
from .spacetime import (
    DIM, ETA, BackgroundKind, BackgroundSpec, GeometryPoint, Background,
    build_background, einstein_residual, reference_background,
)

__all__ = [
    "Grid", "CFL_LIMIT",
    "DIM", "ETA", "BackgroundKind", "BackgroundSpec", "GeometryPoint", "Background",
    "build_background", "einstein_residual", "reference_background",
]
