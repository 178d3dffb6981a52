"""
Covariant calculus on the background.

Partial derivatives are second-order centered differences: periodic in x,
``np.gradient`` with second-order one-sided stencils at the two temporal
boundary layers. Derivatives along y and z vanish identically. Connection
terms use the analytic Christoffel symbols of the background.

The derivative index is always placed first: covariant_derivative(T)[c, ...]
is nabla_c T_... .
"""

from typing import Tuple, Union

import numpy as np

from src.background.spacetime import Background
from src.fields.tensors import (
    DIM, AnyField, RankTwo, ScalarField, SymField2, TensorField, VecField,
    as_tensor, require_interior_support,
)


# ============================================================================
# Partial Derivatives
# ============================================================================

def d_t(data: np.ndarray, dt: float) -> np.ndarray:
    """Time derivative along the second-to-last axis."""
    return np.gradient(data, dt, axis=-2, edge_order=2)


def d_x(data: np.ndarray, dx: float) -> np.ndarray:
    """Periodic centered x-derivative along the last axis."""
    return (np.roll(data, -1, axis=-1) - np.roll(data, 1, axis=-1)) / (2.0 * dx)


def d_xx(data: np.ndarray, dx: float) -> np.ndarray:
    """Periodic three-point second x-derivative along the last axis."""
    return (np.roll(data, -1, axis=-1) - 2.0 * data + np.roll(data, 1, axis=-1)) / dx ** 2


def partial_derivative(data: np.ndarray, dt: float, dx: float) -> np.ndarray:
    """Stack of coordinate derivatives, new leading axis of length 4."""
    out = np.zeros((DIM,) + data.shape, dtype=np.result_type(data, float))
    out[0] = d_t(data, dt)
    out[1] = d_x(data, dx)
    return out


# ============================================================================
# Connection Terms
# ============================================================================

def connection_action(christoffel: np.ndarray, data: np.ndarray, variance: str) -> np.ndarray:
    """
    Christoffel part of the covariant derivative in every direction.

    ``christoffel`` is Gamma^a_bc with a trailing time axis; ``data`` carries the
    tensor indices followed by (t, x). Returns an array with a new leading
    derivative axis: out[c, ...] = sum over index slots of +Gamma^a_ce T^..e..
    (upper slots) or -Gamma^e_cb T_..e.. (lower slots).
    """
    grid_axes = data.shape[len(variance):]
    out = np.zeros((DIM,) + data.shape, dtype=np.result_type(christoffel, data))
    for slot, kind in enumerate(variance):
        moved = np.moveaxis(data, slot, 0)
        rest = moved.shape[1:]
        flat = moved.reshape((DIM, -1) + grid_axes)
        if kind == "u":
            term = np.einsum('acet,emtx->camtx', christoffel, flat)
        else:
            term = -np.einsum('ecbt,emtx->cbmtx', christoffel, flat)
        term = term.reshape((DIM, DIM) + rest)
        out += np.moveaxis(term, 1, 1 + slot)
    return out


def covariant_derivative(bg: Background, field_like: AnyField) -> TensorField:
    """nabla_c of a field; the result carries one more lower index, in front."""
    tensor = as_tensor(field_like)
    _check_grid(bg, tensor)
    grid = bg.grid
    data = partial_derivative(tensor.data, grid.dt, grid.dx)
    data = data + connection_action(bg.christoffel, tensor.data, tensor.variance)
    return TensorField(grid, data, "d" + tensor.variance)


def second_covariant_derivative(bg: Background, field_like: AnyField) -> TensorField:
    """nabla_d nabla_c T as nested second-order stencils, indices [d, c, ...]."""
    return covariant_derivative(bg, covariant_derivative(bg, field_like))


# ============================================================================
# Index Gymnastics
# ============================================================================

def _apply_metric(metric: np.ndarray, data: np.ndarray, slot: int, rank: int) -> np.ndarray:
    grid_axes = data.shape[rank:]
    moved = np.moveaxis(data, slot, 0)
    rest = moved.shape[1:]
    flat = moved.reshape((DIM, -1) + grid_axes)
    mapped = np.einsum('abt,bmtx->amtx', metric, flat).reshape((DIM,) + rest)
    return np.moveaxis(mapped, 0, slot)


def lower_index(bg: Background, field_like: AnyField, slot: int = 0) -> TensorField:
    """Lower an upper index with g."""
    tensor = as_tensor(field_like)
    if tensor.variance[slot] != "u":
        raise ValueError(f"index {slot} of {tensor.variance!r} is not upper")
    data = _apply_metric(bg.g, tensor.data, slot, tensor.rank)
    variance = tensor.variance[:slot] + "d" + tensor.variance[slot + 1:]
    return _rewrap(tensor, data, variance)


def raise_index(bg: Background, field_like: AnyField, slot: int = 0) -> TensorField:
    """Raise a lower index with g^-1."""
    tensor = as_tensor(field_like)
    if tensor.variance[slot] != "d":
        raise ValueError(f"index {slot} of {tensor.variance!r} is not lower")
    data = _apply_metric(bg.g_inv, tensor.data, slot, tensor.rank)
    variance = tensor.variance[:slot] + "u" + tensor.variance[slot + 1:]
    return _rewrap(tensor, data, variance)


def raise_all(bg: Background, field_like: AnyField) -> TensorField:
    tensor = as_tensor(field_like)
    for slot, kind in enumerate(tensor.variance):
        if kind == "d":
            tensor = raise_index(bg, tensor, slot)
    return tensor


def _rewrap(template: TensorField, data: np.ndarray, variance: str) -> TensorField:
    if variance == "":
        return ScalarField(template.grid, data)
    if isinstance(template, VecField):
        return VecField(template.grid, data, variance)
    return TensorField(template.grid, data, variance)


def as_covector(bg: Background, w: VecField) -> VecField:
    return w if w.variance == "d" else lower_index(bg, w)


def as_vector(bg: Background, w: VecField) -> VecField:
    return w if w.variance == "u" else raise_index(bg, w)


# ============================================================================
# Contractions
# ============================================================================

def trace(bg: Background, gamma: RankTwo) -> ScalarField:
    """g^ab gamma_ab."""
    tensor = as_tensor(gamma)
    _check_grid(bg, tensor)
    return ScalarField(bg.grid, np.einsum('abt,abtx->tx', bg.g_inv, tensor.data))


def metric_field(bg: Background, scalar: Union[ScalarField, np.ndarray, float] = 1.0) -> SymField2:
    """phi * g_ab as a symmetric field."""
    values = scalar.data if isinstance(scalar, ScalarField) else scalar
    values = np.broadcast_to(values, bg.grid.shape)
    return SymField2.from_full(bg.grid, bg.g[:, :, :, None] * values)


def trace_reverse(bg: Background, gamma: SymField2) -> Tuple[SymField2, ScalarField]:
    """gamma_bar = gamma - g tr(gamma) / 2, returned with tr(gamma)."""
    tr = trace(bg, gamma)
    return gamma - metric_field(bg, 0.5 * tr.data), tr


def divergence(bg: Background, field_like: AnyField) -> TensorField:
    """Contract the derivative with the first index of the field."""
    tensor = as_tensor(field_like)
    derivative = covariant_derivative(bg, tensor)
    if tensor.variance[0] == "d":
        data = _metric_contract(bg.g_inv, derivative.data)
    else:
        data = np.einsum('cc...->...', derivative.data)
    variance = tensor.variance[1:]
    if variance == "":
        return ScalarField(bg.grid, data)
    if len(variance) == 1:
        return VecField(bg.grid, data, variance)
    return TensorField(bg.grid, data, variance)


def _metric_contract(g_inv: np.ndarray, data: np.ndarray) -> np.ndarray:
    # g^{ca} D[c, a, rest..., t, x]
    rest = data.shape[2:]
    flat = data.reshape((DIM, DIM, -1) + rest[-2:])
    return np.einsum('cat,camtx->mtx', g_inv, flat).reshape(rest)


def box(bg: Background, field_like: AnyField) -> TensorField:
    """Wave operator g^cd nabla_c nabla_d via nested stencils."""
    tensor = as_tensor(field_like)
    second = second_covariant_derivative(bg, tensor)
    data = _metric_contract(bg.g_inv, second.data)
    return _rewrap(tensor, data, tensor.variance)


def lie_derivative_metric(bg: Background, w: VecField) -> SymField2:
    """Lie derivative of the metric, 2 nabla_(a w_b)."""
    covector = as_covector(bg, w)
    derivative = covariant_derivative(bg, covector).data
    return SymField2.from_full(bg.grid, derivative + np.swapaxes(derivative, 0, 1))


# ============================================================================
# Spacetime Pairing
# ============================================================================

def spacetime_pairing(bg: Background, gamma: SymField2, f: RankTwo) -> complex:
    """
    Sum over the grid of gamma_ab f^ab sqrt(-g) dt dx.

    ``f`` must vanish on the first and last two time layers; its lower indices
    are raised with g^-1.
    """
    require_interior_support(f, layers=2, name="test tensor")
    tensor = as_tensor(f)
    if tensor.variance == "dd":
        tensor = raise_all(bg, tensor)
    elif tensor.variance != "uu":
        raise ValueError(f"pairing expects a rank-2 test tensor, got {tensor.variance!r}")
    _check_grid(bg, gamma.as_tensor())
    density = np.einsum('abtx,abtx,t->tx', gamma.full(), tensor.data, bg.sqrt_minus_g)
    return complex(np.sum(density) * bg.grid.dt * bg.grid.dx)


def _check_grid(bg: Background, tensor: TensorField) -> None:
    if tensor.grid != bg.grid:
        raise ValueError(
            f"field grid {tensor.grid.nt}x{tensor.grid.nx} does not match background grid "
            f"{bg.grid.nt}x{bg.grid.nx}"
        )
