"""
Slice data of spacetime perturbations and the spacetime gauge vector behind
pure-gauge slice data.
"""

import numpy as np

from src.adm.geometry import SPATIAL_DIM
from src.adm.state import ADMPerturbation, slice_background
from src.background.spacetime import Background
from src.fields.calculus import d_x
from src.fields.tensors import SymField2, VecField
from src.utils.errors import UnsupportedBackgroundError


def synchronous_slice_data(bg: Background, gamma: SymField2, sigma: int) -> ADMPerturbation:
    """
    (gamma3_ij, p^ij) of a synchronous-gauge perturbation (gamma_0a = 0) on
    slice sigma.

    The lapse a and zero shift are unperturbed, so delta K_ij = d_t gamma_ij / (2a)
    and p is the first variation of varpi = sqrt(h) (K^ab - h^ab K).
    """
    if not 1 <= sigma <= bg.grid.nt - 2:
        raise ValueError(f"slice {sigma} is not in the grid interior")
    state = slice_background(bg, sigma)
    geometry = state.geometry
    a, rate = bg.scale_factor(bg.grid.t[sigma])
    a, rate = float(a), float(rate)
    full = gamma.full()
    gamma3 = full[1:, 1:, sigma].copy()
    rate_gamma = (full[1:, 1:, sigma + 1] - full[1:, 1:, sigma - 1]) / (2.0 * bg.grid.dt)

    h, h_inv, sqrt_h = geometry.h, geometry.h_inv, geometry.sqrt_h
    curvature = (rate / a) * h                     # K_ij
    curvature_up = geometry.raise_pair(curvature)
    curvature_trace = geometry.trace(curvature)
    delta_curvature = rate_gamma / (2.0 * a)
    gamma_up = geometry.raise_pair(gamma3)
    trace_gamma = geometry.trace(gamma3)

    delta_curvature_up = (geometry.raise_pair(delta_curvature)
                          - np.einsum('acx,cdx,dbx->abx', gamma_up, h, curvature_up)
                          - np.einsum('acx,cdx,dbx->abx', curvature_up, h, gamma_up))
    delta_trace = -np.einsum('abx,abx->x', gamma_up, curvature) + geometry.trace(delta_curvature)
    p = (0.5 * trace_gamma * sqrt_h * (curvature_up - h_inv * curvature_trace)
         + sqrt_h * (delta_curvature_up + gamma_up * curvature_trace - h_inv * delta_trace))
    return ADMPerturbation(gamma3, p)


def spacetime_gauge_vector(bg: Background, C: np.ndarray, X: np.ndarray, sigma: int) -> VecField:
    """
    Gauge vector on Minkowski whose Lie derivative of the metric is synchronous
    with slice data pure_gauge_data(C, X) on slice sigma:
    w^0 = -C, w^i = X^i - (t - t_sigma) d_i C.
    """
    if bg.is_de_sitter:
        raise UnsupportedBackgroundError(
            "spacetime gauge vector of slice gauge data is only built on Minkowski",
            background=bg.spec.kind.value,
        )
    grid = bg.grid
    C = np.asarray(C)
    X = np.asarray(X)
    if C.shape != (grid.nx,) or X.shape != (SPATIAL_DIM, grid.nx):
        raise ValueError(f"C must have shape ({grid.nx},) and X shape (3, {grid.nx})")
    offsets = grid.t - grid.t[sigma]
    data = np.zeros((4,) + grid.shape, dtype=np.result_type(C, X, float))
    data[0] = -C[None, :]
    data[1:] = X[:, None, :]
    data[1] -= offsets[:, None] * d_x(C, grid.dx)[None, :]
    return VecField(grid, data, "u")
