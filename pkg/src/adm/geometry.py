"""
Riemannian geometry of a constant-time slice.

Slice tensors are arrays of shape (3, ..., 3, nx): spatial indices (x, y, z)
first, then the periodic x samples. Only d/dx is nonzero.
"""

from dataclasses import dataclass

import numpy as np

from src.fields.calculus import d_x
from src.utils.errors import GeometryError

SPATIAL_DIM = 3


def spatial_partial(data: np.ndarray, dx: float) -> np.ndarray:
    """Coordinate derivatives on the slice, new leading axis of length 3."""
    out = np.zeros((SPATIAL_DIM,) + data.shape, dtype=np.result_type(data, float))
    out[0] = d_x(data, dx)
    return out


@dataclass(frozen=True, eq=False)
class SliceGeometry:
    """Metric h with inverse, volume element, Christoffels and curvature."""
    h: np.ndarray
    h_inv: np.ndarray
    sqrt_h: np.ndarray
    christoffel: np.ndarray  # Gamma^i_jk as [i, j, k, x]
    ricci: np.ndarray        # R_jk
    ricci_scalar: np.ndarray
    dx: float

    def lower(self, data: np.ndarray, slot: int) -> np.ndarray:
        return _apply(self.h, data, slot)

    def raise_(self, data: np.ndarray, slot: int) -> np.ndarray:
        return _apply(self.h_inv, data, slot)

    def lower_pair(self, data: np.ndarray) -> np.ndarray:
        return np.einsum('acx,bdx,cdx->abx', self.h, self.h, data)

    def raise_pair(self, data: np.ndarray) -> np.ndarray:
        return np.einsum('acx,bdx,cdx->abx', self.h_inv, self.h_inv, data)

    def trace(self, data: np.ndarray, upper: bool = False) -> np.ndarray:
        metric = self.h if upper else self.h_inv
        return np.einsum('abx,abx->x', metric, data)

    def covariant_derivative(self, data: np.ndarray, variance: str) -> np.ndarray:
        """D_c T with the derivative index in front."""
        return spatial_partial(data, self.dx) + _connection_action(self.christoffel, data, variance)

    def integrate(self, density: np.ndarray) -> complex:
        """Coordinate integral over the slice; the transverse circles have unit length."""
        return complex(np.sum(density) * self.dx)


def _apply(metric: np.ndarray, data: np.ndarray, slot: int) -> np.ndarray:
    moved = np.moveaxis(data, slot, 0)
    rest = moved.shape[1:]
    flat = moved.reshape((SPATIAL_DIM, -1, data.shape[-1]))
    out = np.einsum('abx,bmx->amx', metric, flat).reshape((SPATIAL_DIM,) + rest)
    return np.moveaxis(out, 0, slot)


def _connection_action(christoffel: np.ndarray, data: np.ndarray, variance: str) -> np.ndarray:
    nx = data.shape[-1]
    out = np.zeros((SPATIAL_DIM,) + data.shape, dtype=np.result_type(christoffel, data))
    for slot, kind in enumerate(variance):
        moved = np.moveaxis(data, slot, 0)
        rest = moved.shape[1:]
        flat = moved.reshape((SPATIAL_DIM, -1, nx))
        if kind == "u":
            term = np.einsum('acex,emx->camx', christoffel, flat)
        else:
            term = -np.einsum('ecbx,emx->cbmx', christoffel, flat)
        term = term.reshape((SPATIAL_DIM, SPATIAL_DIM) + rest)
        out += np.moveaxis(term, 1, 1 + slot)
    return out


def slice_geometry(h: np.ndarray, dx: float) -> SliceGeometry:
    """
    Geometry of a slice metric of shape (3, 3, nx).

    Raises GeometryError when h is not positive definite at some point.
    """
    points = np.moveaxis(np.real(h), -1, 0)
    eigenvalues = np.linalg.eigvalsh(0.5 * (points + np.swapaxes(points, 1, 2)))
    smallest = float(np.min(eigenvalues))
    if smallest <= 0.0:
        raise GeometryError(
            f"slice metric is not positive definite (smallest eigenvalue {smallest:.3e})",
            smallest_eigenvalue=smallest, point=int(np.argmin(np.min(eigenvalues, axis=1))),
        )
    h_inv = np.moveaxis(np.linalg.inv(np.moveaxis(h, -1, 0)), 0, -1)
    sqrt_h = np.sqrt(np.linalg.det(np.moveaxis(h, -1, 0)))

    dh = spatial_partial(h, dx)  # d_c h_ab
    lowered = 0.5 * (np.einsum('jlkx->ljkx', dh) + np.einsum('kljx->ljkx', dh) - dh)
    christoffel = np.einsum('ilx,ljkx->ijkx', h_inv, lowered)

    dgamma = spatial_partial(christoffel, dx)  # d_m Gamma^i_jk
    ricci = (np.einsum('iijkx->jkx', dgamma)
             - np.einsum('kiijx->jkx', dgamma)
             + np.einsum('iilx,ljkx->jkx', christoffel, christoffel)
             - np.einsum('iklx,lijx->jkx', christoffel, christoffel))
    ricci_scalar = np.einsum('jkx,jkx->x', h_inv, ricci)
    return SliceGeometry(h, h_inv, sqrt_h, christoffel, ricci, ricci_scalar, dx)
