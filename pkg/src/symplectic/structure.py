"""
Pre-symplectic product, symplectic current and the constraint pairing
identity on constant-time slices.
"""

from typing import Tuple

import numpy as np

from src.background.spacetime import Background
from src.fields.calculus import as_vector, divergence, lie_derivative_metric
from src.fields.tensors import ScalarField, SymField2, VecField
from src.linop.operators import conjugate_momentum, linearized_einstein


def _check_slice(bg: Background, sigma: int) -> None:
    if not 2 <= sigma <= bg.grid.nt - 3:
        raise ValueError(f"slice {sigma} is not in the grid interior")


def _slice_integral(bg: Background, density: np.ndarray, sigma: int) -> complex:
    return complex(np.sum(density) * bg.sqrt_h[sigma] * bg.grid.dx)


def presymplectic(bg: Background, gamma1: SymField2, gamma2: SymField2, sigma: int) -> complex:
    """omega_sigma(gamma1, gamma2) = int (gamma1_ab pi2^ab - gamma2_ab pi1^ab) sqrt(h) dx."""
    _check_slice(bg, sigma)
    _, pi1 = conjugate_momentum(bg, gamma1)
    _, pi2 = conjugate_momentum(bg, gamma2)
    density = (np.einsum('abx,abx->x', gamma1.full()[:, :, sigma], pi2.data[:, :, sigma])
               - np.einsum('abx,abx->x', gamma2.full()[:, :, sigma], pi1.data[:, :, sigma]))
    return _slice_integral(bg, density, sigma)


def symplectic_current(bg: Background, gamma1: SymField2, gamma2: SymField2) -> VecField:
    """j^c = gamma2_ab Pi1^cab - gamma1_ab Pi2^cab; omega is the flux of n_c j^c."""
    momentum1, _ = conjugate_momentum(bg, gamma1)
    momentum2, _ = conjugate_momentum(bg, gamma2)
    data = (np.einsum('abtx,cabtx->ctx', gamma2.full(), momentum1.data)
            - np.einsum('abtx,cabtx->ctx', gamma1.full(), momentum2.data))
    return VecField(bg.grid, data, "u")


def current_divergence(bg: Background, gamma1: SymField2, gamma2: SymField2) -> ScalarField:
    """nabla_c j^c, equal to gamma2 . L(gamma1) - gamma1 . L(gamma2) off-shell."""
    return divergence(bg, symplectic_current(bg, gamma1, gamma2))


def current_divergence_expected(bg: Background, gamma1: SymField2, gamma2: SymField2) -> ScalarField:
    """gamma2_ab L^ab(gamma1) - gamma1_ab L^ab(gamma2)."""
    g_inv = bg.g_inv
    einstein1 = np.einsum('act,bdt,cdtx->abtx', g_inv, g_inv, linearized_einstein(bg, gamma1).full())
    einstein2 = np.einsum('act,bdt,cdtx->abtx', g_inv, g_inv, linearized_einstein(bg, gamma2).full())
    data = (np.einsum('abtx,abtx->tx', gamma2.full(), einstein1)
            - np.einsum('abtx,abtx->tx', gamma1.full(), einstein2))
    return ScalarField(bg.grid, data)


def constraint_pairing_identity(bg: Background, gamma: SymField2, w: VecField,
                                sigma: int) -> Tuple[complex, complex]:
    """
    Both sides of omega_sigma(gamma, Lie_w g) = 2 int w^a L_ab(gamma) n^b sqrt(h) dx,
    each evaluated independently.
    """
    _check_slice(bg, sigma)
    lhs = presymplectic(bg, gamma, lie_derivative_metric(bg, w), sigma)
    w_up = as_vector(bg, w).data[:, sigma]
    einstein = linearized_einstein(bg, gamma).full()[:, :, sigma]
    density = 2.0 * np.einsum('ax,abx,b->x', w_up, einstein, bg.n_up[:, sigma])
    rhs = _slice_integral(bg, density, sigma)
    return lhs, rhs


def presymplectic_magnitude(bg: Background, gamma1: SymField2, gamma2: SymField2, sigma: int) -> float:
    """int (|gamma1_ab pi2^ab| + |gamma2_ab pi1^ab|) sqrt(h) dx, the scale of omega_sigma."""
    _check_slice(bg, sigma)
    _, pi1 = conjugate_momentum(bg, gamma1)
    _, pi2 = conjugate_momentum(bg, gamma2)
    density = (np.abs(np.einsum('abx,abx->x', gamma1.full()[:, :, sigma], pi2.data[:, :, sigma]))
               + np.abs(np.einsum('abx,abx->x', gamma2.full()[:, :, sigma], pi1.data[:, :, sigma])))
    return abs(_slice_integral(bg, density, sigma))
