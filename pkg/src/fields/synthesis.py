"""
Field factories: compact bumps, exact plane waves and seeded random fields.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from src.background.spacetime import Background
from src.fields.tensors import (
    COMPONENT_ORDER, DIM, ScalarField, SupportWindow, SymField2, TensorField, VecField,
)
from src.utils.common import bump, periodic_offset
from src.utils.errors import SupportError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


class FieldRank(Enum):
    """Kind of field a recipe produces."""
    SCALAR = "scalar"
    VECTOR = "vector"
    COVECTOR = "covector"
    TENSOR = "tensor"


class Polarization(Enum):
    """Transverse-traceless polarizations for waves travelling along x."""
    PLUS = "plus"
    CROSS = "cross"


@dataclass(frozen=True)
class BumpRecipe:
    """
    Product bump B((t - t_c)/r_t) B(d(x, x_c)/r_x) times a constant polarization.

    ``polarization`` is a 4x4 matrix for tensors (symmetric gives SymField2,
    otherwise a general (0,2) TensorField), a length-4 vector for vector ranks,
    and ignored for scalars.
    """
    center: Tuple[float, float]
    radii: Tuple[float, float]
    polarization: Optional[Sequence] = None
    rank: FieldRank = FieldRank.TENSOR
    amplitude: complex = 1.0


@dataclass(frozen=True)
class PlaneWaveRecipe:
    """Exact transverse-traceless wave with integer mode number along x."""
    mode: int
    polarization: Polarization = Polarization.PLUS
    phase: float = 0.0
    amplitude: float = 1.0


@dataclass(frozen=True)
class RandomRecipe:
    """Band-limited trigonometric field with seeded coefficients."""
    seed: int
    smoothness: int = 3
    rank: FieldRank = FieldRank.TENSOR
    amplitude: float = 1.0
    temporal_modes: int = 3


Recipe = Union[BumpRecipe, PlaneWaveRecipe, RandomRecipe]
Synthesized = Union[SymField2, TensorField, VecField, ScalarField]

_COMPONENT_COUNT = {FieldRank.SCALAR: 1, FieldRank.VECTOR: DIM, FieldRank.COVECTOR: DIM,
                    FieldRank.TENSOR: len(COMPONENT_ORDER)}


def synthesize_field(bg: Background, recipe: Recipe) -> Synthesized:
    """Build a field on the background grid from a recipe."""
    if isinstance(recipe, BumpRecipe):
        return _bump_field(bg, recipe)
    if isinstance(recipe, PlaneWaveRecipe):
        return _plane_wave(bg, recipe)
    if isinstance(recipe, RandomRecipe):
        return _random_field(bg, recipe)
    raise TypeError(f"unknown recipe type: {type(recipe).__name__}")


def bump_profile(bg: Background, center: Tuple[float, float], radii: Tuple[float, float]) -> np.ndarray:
    """Scalar bump profile on the grid, exactly zero outside its support."""
    grid = bg.grid
    r_t, r_x = radii
    if r_t <= 0 or r_x <= 0:
        return np.zeros(grid.shape)
    if r_x >= 0.5 * grid.L:
        raise SupportError(f"bump x-radius {r_x} exceeds half the spatial period", radius=r_x)
    profile_t = bump((grid.t - center[0]) / r_t)
    profile_x = bump(periodic_offset(grid.x, center[1], grid.L) / r_x)
    profile = profile_t[:, None] * profile_x[None, :]
    edge = np.concatenate([profile[:2], profile[-2:]])
    if np.any(edge != 0.0):
        raise SupportError(
            f"bump centered at t={center[0]} with radius {r_t} reaches the temporal boundary layers",
            center=center[0], radius=r_t,
        )
    return profile


def _bump_field(bg: Background, recipe: BumpRecipe) -> Synthesized:
    grid = bg.grid
    profile = recipe.amplitude * bump_profile(bg, recipe.center, recipe.radii)
    window = SupportWindow.from_mask(profile != 0)

    if recipe.rank is FieldRank.SCALAR:
        return ScalarField(grid, profile)

    if recipe.rank in (FieldRank.VECTOR, FieldRank.COVECTOR):
        direction = np.asarray(recipe.polarization if recipe.polarization is not None
                               else [1.0, 0.0, 0.0, 0.0])
        variance = "u" if recipe.rank is FieldRank.VECTOR else "d"
        return VecField(grid, direction[:, None, None] * profile, variance)

    polarization = np.asarray(recipe.polarization if recipe.polarization is not None
                              else np.eye(DIM))
    data = polarization[:, :, None, None] * profile
    if np.allclose(polarization, polarization.T, rtol=0.0, atol=0.0):
        field = SymField2.from_full(grid, data)
        return field.with_support(window) if window is not None else field
    return TensorField(grid, data, "dd")


def _plane_wave(bg: Background, recipe: PlaneWaveRecipe) -> SymField2:
    grid = bg.grid
    k = 2.0 * np.pi * recipe.mode / grid.L
    t = grid.t[:, None]
    theta = k * grid.x[None, :] - abs(k) * t + recipe.phase
    profile = np.cos(theta)
    if bg.is_de_sitter:
        profile = profile - abs(k) * t * np.sin(theta)
    profile = recipe.amplitude * (bg.a ** 2)[:, None] * profile

    data = np.zeros((DIM, DIM) + grid.shape)
    if recipe.polarization is Polarization.PLUS:
        data[2, 2] = profile
        data[3, 3] = -profile
    else:
        data[2, 3] = profile
        data[3, 2] = profile
    return SymField2.from_full(grid, data)


def _random_field(bg: Background, recipe: RandomRecipe) -> Synthesized:
    grid = bg.grid
    rng = np.random.default_rng(recipe.seed)
    count = _COMPONENT_COUNT[recipe.rank]
    tau = (grid.t - grid.t0) / (grid.t1 - grid.t0)
    k = 2.0 * np.pi / grid.L
    values = np.zeros((count,) + grid.shape)
    for component in range(count):
        for m in range(recipe.smoothness + 1):
            spatial = (rng.normal() * np.cos(m * k * grid.x)
                       + rng.normal() * np.sin(m * k * grid.x))
            for n in range(recipe.temporal_modes):
                temporal = np.cos(np.pi * n * tau + rng.uniform(0.0, 2.0 * np.pi))
                weight = rng.normal() / (1.0 + m * m + n * n)
                values[component] += weight * temporal[:, None] * spatial[None, :]
    values *= recipe.amplitude

    if recipe.rank is FieldRank.SCALAR:
        return ScalarField(grid, values[0])
    if recipe.rank is FieldRank.VECTOR:
        return VecField(grid, values, "u")
    if recipe.rank is FieldRank.COVECTOR:
        return VecField(grid, values, "d")
    return SymField2(grid, values)
