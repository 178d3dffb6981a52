"""
Seeded inputs shared by the suites and the subcommands.

Every factory evaluates a fixed continuum profile on the grid, so the same
seed gives consistent fields on a grid and on its refinement.
"""

from typing import List, Tuple

import numpy as np

from src.adm.state import ADMPerturbation
from src.background import Background
from src.fields import (
    BumpRecipe, FieldRank, PlaneWaveRecipe, Polarization, RandomRecipe, SymField2, TensorField,
    VecField, synthesize_field,
)
from src.greens import Direction, LevelOperator, WaveOperator
from src.symplectic import Observable, bianchi_test_tensor, make_observable

_SOURCE_RANKS = {
    WaveOperator.TENSOR_P: FieldRank.TENSOR,
    WaveOperator.VECTOR_BOX_LAMBDA: FieldRank.VECTOR,
    WaveOperator.SCALAR_BOX_2LAMBDA: FieldRank.SCALAR,
}


def random_tensor(bg: Background, seed: int) -> SymField2:
    return synthesize_field(bg, RandomRecipe(seed=seed))


def random_vector(bg: Background, seed: int) -> VecField:
    return synthesize_field(bg, RandomRecipe(seed=seed, rank=FieldRank.VECTOR, amplitude=0.5))


def symmetric_polarization(rng: np.random.Generator) -> np.ndarray:
    matrix = rng.normal(size=(4, 4))
    return 0.5 * (matrix + matrix.T)


def bump_tensor(bg: Background, seed: int, radii: Tuple[float, float] = (0.5, 1.5),
                 t_fraction: float = 0.5) -> SymField2:
    rng = np.random.default_rng(seed)
    grid = bg.grid
    center = (grid.t0 + t_fraction * (grid.t1 - grid.t0), rng.uniform(0.0, grid.L))
    return synthesize_field(bg, BumpRecipe(center, radii, symmetric_polarization(rng)))


def slice_index(bg: Background, fraction: float = 0.5) -> int:
    return int(round(fraction * (bg.grid.nt - 1)))


def window(bg: Background, lo: float, hi: float) -> Tuple[int, int]:
    return slice_index(bg, lo), slice_index(bg, hi)


def slice_profiles(nx: int, L: float, rng: np.random.Generator, count: int,
                    modes: int = 3) -> np.ndarray:
    """Band-limited periodic profiles on the x samples, one row per component."""
    x = L * np.arange(nx) / nx
    k = 2.0 * np.pi / L
    out = np.zeros((count, nx))
    for row in range(count):
        for m in range(modes + 1):
            weight = 1.0 / (1.0 + m * m)
            out[row] += weight * (rng.normal() * np.cos(m * k * x) + rng.normal() * np.sin(m * k * x))
    return out


def symmetric_slice(profiles: np.ndarray) -> np.ndarray:
    nx = profiles.shape[-1]
    out = np.zeros((3, 3, nx))
    row = 0
    for a in range(3):
        for b in range(a, 3):
            out[a, b] = profiles[row]
            out[b, a] = profiles[row]
            row += 1
    return out


def slice_perturbation(bg: Background, seed: int) -> ADMPerturbation:
    rng = np.random.default_rng(seed)
    profiles = slice_profiles(bg.grid.nx, bg.grid.L, rng, 12)
    return ADMPerturbation(symmetric_slice(profiles[:6]), symmetric_slice(profiles[6:]))


def plane_wave_pair(bg: Background, seed: int) -> Tuple[SymField2, SymField2]:
    rng = np.random.default_rng(seed)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    first = synthesize_field(bg, PlaneWaveRecipe(mode=1, phase=phase))
    second = synthesize_field(bg, PlaneWaveRecipe(mode=1, phase=phase + 0.5 * np.pi))
    cross = synthesize_field(bg, PlaneWaveRecipe(mode=2, polarization=Polarization.CROSS, phase=phase))
    return first + cross, second


def bianchi_pair(bg: Background, seed: int) -> Tuple[SymField2, SymField2]:
    """Two divergence-free test tensors in overlapping windows."""
    wave1, wave2 = plane_wave_pair(bg, seed)
    return (bianchi_test_tensor(bg, wave1, window(bg, 0.3, 0.5)),
            bianchi_test_tensor(bg, wave2, window(bg, 0.4, 0.6)))


def antisymmetric_bump(bg: Background, seed: int) -> TensorField:
    rng = np.random.default_rng(seed)
    matrix = rng.normal(size=(4, 4))
    grid = bg.grid
    center = (0.5 * (grid.t0 + grid.t1), 0.5 * grid.L)
    return synthesize_field(bg, BumpRecipe(center, (0.5, 1.5), matrix - matrix.T))


def gauge_profiles(bg: Background, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    profiles = slice_profiles(bg.grid.nx, bg.grid.L, rng, 4, modes=2)
    return profiles[0], profiles[1:]


def greens_source(bg: Background, operator: WaveOperator, seed: int):
    """Compact bump source of the rank the operator acts on."""
    rng = np.random.default_rng(seed)
    grid = bg.grid
    center = (0.5 * (grid.t0 + grid.t1), rng.uniform(0.0, grid.L))
    if operator is WaveOperator.TENSOR_P:
        polarization = symmetric_polarization(rng)
    else:
        polarization = rng.normal(size=4)
    return synthesize_field(bg, BumpRecipe(center, (0.3, 0.6), polarization, _SOURCE_RANKS[operator]))


def wave_vector(bg: Background, seed: int) -> VecField:
    """Solution of (box + Lambda) w = 0 from seeded data on the central slice."""
    rng = np.random.default_rng(seed)
    grid = bg.grid
    profiles = 0.2 * slice_profiles(grid.nx, grid.L, rng, 8, modes=2)
    level_op = LevelOperator(bg, WaveOperator.VECTOR_BOX_LAMBDA, "u")
    source = np.zeros((4,) + grid.shape)
    data = level_op.evolve_from(slice_index(bg), profiles[:4], profiles[4:], source, Direction.BOTH)
    return VecField(grid, data, "u")


def separation_observables(bg: Background) -> List[Observable]:
    """Bianchi observables of modes 1 and 2, both polarizations, in quadrature."""
    span = window(bg, 0.3, 0.5)
    observables = []
    for mode in (1, 2):
        for polarization in Polarization:
            for phase in (0.0, 0.5 * np.pi):
                wave = synthesize_field(bg, PlaneWaveRecipe(mode=mode, polarization=polarization,
                                                            phase=phase))
                label = f"{polarization.value}{mode}@{phase:.2f}"
                observables.append(make_observable(bg, bianchi_test_tensor(bg, wave, span), label))
    return observables
