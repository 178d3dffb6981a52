"""
ADM variables on a constant-time slice and the Hamiltonian and momentum
constraints.

The momentum density is varpi^ab = sqrt(h) (K^ab - h^ab K) with
K_ij = 1/2 Lie_n h_ij, the extrinsic curvature of the slice. The full trace
(not K / 2) makes both constraints vanish on the background slices.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Tuple

import numpy as np

from src.adm.geometry import SPATIAL_DIM, SliceGeometry, slice_geometry
from src.background.spacetime import Background
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def _check_slice_array(name: str, array: np.ndarray, errors: list) -> None:
    if array.ndim != 3 or array.shape[:2] != (SPATIAL_DIM, SPATIAL_DIM):
        errors.append(f"{name} must have shape (3, 3, nx), got {array.shape}")
    elif not np.all(np.isfinite(array)):
        errors.append(f"{name} must be finite")


@dataclass(frozen=True, eq=False)
class ADMState:
    """Slice metric h_ij, momentum density varpi^ij and cosmological constant."""
    h: np.ndarray
    varpi: np.ndarray
    cosmological_constant: float
    dx: float

    def __post_init__(self):
        errors = []
        _check_slice_array("h", self.h, errors)
        _check_slice_array("varpi", self.varpi, errors)
        if not errors and self.h.shape != self.varpi.shape:
            errors.append(f"h shape {self.h.shape} differs from varpi shape {self.varpi.shape}")
        if self.dx <= 0:
            errors.append(f"dx must be positive, got {self.dx}")
        if errors:
            raise ValueError(f"ADMState validation failed: {'; '.join(errors)}")

    @property
    def nx(self) -> int:
        return self.h.shape[-1]

    @cached_property
    def geometry(self) -> SliceGeometry:
        return slice_geometry(self.h, self.dx)

    @property
    def sqrt_h(self) -> np.ndarray:
        return self.geometry.sqrt_h

    def to_dict(self) -> Dict[str, Any]:
        return {
            'h': self.h.tolist(),
            'varpi': self.varpi.tolist(),
            'density': {'h': False, 'varpi': True},
            'cosmological_constant': self.cosmological_constant,
            'dx': self.dx,
        }


@dataclass(frozen=True, eq=False)
class ADMPerturbation:
    """Linearized slice data (gamma3_ij, p^ij); p is a density like varpi."""
    gamma3: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        errors = []
        _check_slice_array("gamma3", self.gamma3, errors)
        _check_slice_array("p", self.p, errors)
        if not errors and self.gamma3.shape != self.p.shape:
            errors.append(f"gamma3 shape {self.gamma3.shape} differs from p shape {self.p.shape}")
        if errors:
            raise ValueError(f"ADMPerturbation validation failed: {'; '.join(errors)}")

    @property
    def nx(self) -> int:
        return self.gamma3.shape[-1]

    def _check(self, other: 'ADMPerturbation') -> None:
        if other.gamma3.shape != self.gamma3.shape:
            raise ValueError(f"perturbation shapes differ: {self.gamma3.shape} vs {other.gamma3.shape}")

    def __add__(self, other: 'ADMPerturbation') -> 'ADMPerturbation':
        self._check(other)
        return ADMPerturbation(self.gamma3 + other.gamma3, self.p + other.p)

    def __sub__(self, other: 'ADMPerturbation') -> 'ADMPerturbation':
        self._check(other)
        return ADMPerturbation(self.gamma3 - other.gamma3, self.p - other.p)

    def __mul__(self, scalar: complex) -> 'ADMPerturbation':
        return ADMPerturbation(self.gamma3 * scalar, self.p * scalar)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(max(np.max(np.abs(self.gamma3)), np.max(np.abs(self.p))))

    @classmethod
    def zeros(cls, nx: int, dtype=float) -> 'ADMPerturbation':
        shape = (SPATIAL_DIM, SPATIAL_DIM, nx)
        return cls(np.zeros(shape, dtype=dtype), np.zeros(shape, dtype=dtype))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'gamma3': np.real(self.gamma3).tolist(),
            'p': np.real(self.p).tolist(),
            'density': {'gamma3': False, 'p': True},
        }


def slice_background(bg: Background, sigma: int) -> ADMState:
    """
    ADM data of the background slice t = t[sigma].

    K_ij = (a'/a^2) h_ij comes from the closed-form scale factor, not from
    differencing the sampled metric.
    """
    if not 0 < sigma < bg.grid.nt - 1:
        raise ValueError(f"slice {sigma} is not in the grid interior")
    a, rate = bg.scale_factor(bg.grid.t[sigma])
    a, rate = float(a), float(rate)
    nx = bg.grid.nx
    h = np.zeros((SPATIAL_DIM, SPATIAL_DIM, nx))
    for i in range(SPATIAL_DIM):
        h[i, i] = a ** 2
    hubble = rate / a  # K_ij = hubble * h_ij
    h_inv = np.zeros_like(h)
    for i in range(SPATIAL_DIM):
        h_inv[i, i] = 1.0 / a ** 2
    sqrt_h = a ** 3
    # K^ab - h^ab K = (hubble - 3 hubble) h^ab
    varpi = sqrt_h * (-2.0 * hubble) * h_inv
    return ADMState(h, varpi, bg.cosmological_constant, bg.grid.dx)


def _contractions(geometry: SliceGeometry, varpi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(varpi^ab varpi_ab, varpi) with indices moved by h."""
    varpi_low = geometry.lower_pair(varpi)
    square = np.einsum('abx,abx->x', varpi, varpi_low)
    return square, geometry.trace(varpi, upper=True)


def constraints(state: ADMState) -> Tuple[np.ndarray, np.ndarray]:
    """
    Hamiltonian constraint H = -R + (varpi.varpi - varpi^2/2)/h + 2 Lambda and
    momentum constraint delta^a = D_b(varpi^ab / sqrt(h)).
    """
    geometry = state.geometry
    det = geometry.sqrt_h ** 2
    square, trace_varpi = _contractions(geometry, state.varpi)
    hamiltonian = (-geometry.ricci_scalar + (square - 0.5 * trace_varpi ** 2) / det
                   + 2.0 * state.cosmological_constant)
    tensor = state.varpi / geometry.sqrt_h
    momentum = np.einsum('babx->ax', geometry.covariant_derivative(tensor, "uu"))
    return hamiltonian, momentum
