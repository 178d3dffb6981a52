"""
Cauchy data on constant-time slices and the constraint map.
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from src.background.spacetime import Background
from src.fields.calculus import connection_action
from src.fields.tensors import COMPONENT_LABELS, COMPONENT_ORDER, DIM, SymField2
from src.linop.operators import linearized_einstein
from src.utils.errors import SupportError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

_EXTENSION_HALF_WIDTH = 2


def pack_symmetric(full: np.ndarray) -> np.ndarray:
    """(4, 4, ...) -> (10, ...) in COMPONENT_ORDER, averaging (a,b) and (b,a)."""
    return np.stack([0.5 * (full[a, b] + full[b, a]) for a, b in COMPONENT_ORDER])


def unpack_symmetric(packed: np.ndarray) -> np.ndarray:
    """(10, ...) -> (4, 4, ...)."""
    full = np.zeros((DIM, DIM) + packed.shape[1:], dtype=packed.dtype)
    for k, (a, b) in enumerate(COMPONENT_ORDER):
        full[a, b] = packed[k]
        full[b, a] = packed[k]
    return full


@dataclass(frozen=True, eq=False)
class CauchyData:
    """
    Slice value gamma|_sigma and normal derivative n^c nabla_c gamma|_sigma,
    each stored as ten packed components of shape (10, nx).
    """
    sigma: int
    value: np.ndarray
    velocity: np.ndarray

    def __post_init__(self):
        errors = []
        if self.value.ndim != 2 or self.value.shape[0] != len(COMPONENT_ORDER):
            errors.append(f"value must have shape (10, nx), got {self.value.shape}")
        if self.velocity.shape != self.value.shape:
            errors.append(f"velocity shape {self.velocity.shape} differs from value shape {self.value.shape}")
        if not (np.all(np.isfinite(self.value)) and np.all(np.isfinite(self.velocity))):
            errors.append("components must be finite")
        if errors:
            raise ValueError(f"CauchyData validation failed: {'; '.join(errors)}")

    @property
    def nx(self) -> int:
        return self.value.shape[1]

    def full_value(self) -> np.ndarray:
        return unpack_symmetric(self.value)

    def full_velocity(self) -> np.ndarray:
        return unpack_symmetric(self.velocity)

    def norm(self) -> float:
        return float(max(np.max(np.abs(self.value)), np.max(np.abs(self.velocity))))

    def _check(self, other: 'CauchyData') -> None:
        if other.sigma != self.sigma or other.nx != self.nx:
            raise ValueError("Cauchy data live on different slices")

    def __add__(self, other: 'CauchyData') -> 'CauchyData':
        self._check(other)
        return CauchyData(self.sigma, self.value + other.value, self.velocity + other.velocity)

    def __sub__(self, other: 'CauchyData') -> 'CauchyData':
        self._check(other)
        return CauchyData(self.sigma, self.value - other.value, self.velocity - other.velocity)

    def __mul__(self, scalar: complex) -> 'CauchyData':
        return CauchyData(self.sigma, self.value * scalar, self.velocity * scalar)

    __rmul__ = __mul__

    @classmethod
    def zeros(cls, sigma: int, nx: int, dtype=float) -> 'CauchyData':
        shape = (len(COMPONENT_ORDER), nx)
        return cls(sigma, np.zeros(shape, dtype=dtype), np.zeros(shape, dtype=dtype))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'sigma': self.sigma,
            'component_order': list(COMPONENT_LABELS),
            'value': self.value.tolist(),
            'velocity': self.velocity.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CauchyData':
        return cls(int(data['sigma']), np.asarray(data['value']), np.asarray(data['velocity']))


@dataclass(frozen=True)
class ConstraintValue:
    """The four slice components n^a L_ab of the constraint map."""
    sigma: int
    components: np.ndarray  # (4, nx)

    def __post_init__(self):
        if not np.all(np.isfinite(self.components)):
            raise ValueError("ConstraintValue validation failed: components must be finite")

    def norm(self) -> float:
        return float(np.max(np.abs(self.components)))

    def to_dict(self) -> Dict[str, Any]:
        return {'sigma': self.sigma, 'components': self.components.tolist(), 'norm': self.norm()}


# ============================================================================
# Data Extraction
# ============================================================================

def _check_slice(bg: Background, sigma: int) -> None:
    margin = _EXTENSION_HALF_WIDTH
    if not margin <= sigma <= bg.grid.nt - 1 - margin:
        raise SupportError(
            f"slice {sigma} lies within {margin} layers of the temporal boundary",
            sigma=sigma, nt=bg.grid.nt,
        )


def normal_derivative(bg: Background, full: np.ndarray, sigma: int) -> np.ndarray:
    """n^c nabla_c of a (0,2) component array at level sigma, centered in time."""
    rate = (full[..., sigma + 1, :] - full[..., sigma - 1, :]) / (2.0 * bg.grid.dt)
    level = full[..., sigma:sigma + 1, :]
    conn = connection_action(bg.christoffel[..., sigma:sigma + 1], level, "dd")[0][..., 0, :]
    return (rate + conn) / bg.a[sigma]


def coordinate_rate(bg: Background, value_full: np.ndarray, velocity_full: np.ndarray,
                    sigma: int) -> np.ndarray:
    """d_t gamma on the slice recovered from the normal derivative."""
    level = value_full[..., None, :]
    conn = connection_action(bg.christoffel[..., sigma:sigma + 1], level, "dd")[0][..., 0, :]
    return bg.a[sigma] * velocity_full - conn


def extract_data(bg: Background, gamma: SymField2, sigma: int) -> CauchyData:
    """(gamma|_sigma, n^c nabla_c gamma|_sigma)."""
    _check_slice(bg, sigma)
    full = gamma.full()
    value = gamma.components[:, sigma].copy()
    velocity = pack_symmetric(normal_derivative(bg, full, sigma))
    return CauchyData(sigma, value, velocity)


def data_extension(bg: Background, data: CauchyData) -> SymField2:
    """Field linear in t that reproduces the data on its slice."""
    if data.nx != bg.grid.nx:
        raise ValueError(f"data has nx={data.nx}, grid has nx={bg.grid.nx}")
    value = data.full_value()
    rate = coordinate_rate(bg, value, data.full_velocity(), data.sigma)
    offsets = bg.grid.t - bg.grid.t[data.sigma]
    full = value[:, :, None, :] + offsets[None, None, :, None] * rate[:, :, None, :]
    return SymField2.from_full(bg.grid, full)


def constraint(bg: Background, data: CauchyData) -> ConstraintValue:
    """
    n^a L_ab of a local extension of the data.

    The extension is linear in t on the five layers around the slice; the
    normal components of L carry no second time derivatives, so any other
    extension agrees at truncation order.
    """
    _check_slice(bg, data.sigma)
    half = _EXTENSION_HALF_WIDTH
    local_bg = bg.window(data.sigma - half, data.sigma + half)
    local_data = CauchyData(half, data.value, data.velocity)
    extension = data_extension(local_bg, local_data)
    einstein = linearized_einstein(local_bg, extension).full()
    components = np.einsum('a,abx->bx', local_bg.n_up[:, half], einstein[:, :, half, :])
    return ConstraintValue(data.sigma, components)
