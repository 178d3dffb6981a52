"""
Coefficient tensors of the second-order Lagrangian.

The Lagrangian density is T^abcdef nabla_a gamma_bc nabla_d gamma_ef
+ S^abcd gamma_ab gamma_cd; both tensors are built pointwise from the
inverse metric.
"""

from dataclasses import dataclass

import numpy as np

from src.background.spacetime import Background, GeometryPoint
from src.fields.calculus import covariant_derivative
from src.fields.tensors import SymField2


def t_tensor(g_inv: np.ndarray) -> np.ndarray:
    """T^abcdef at a point, shape (4,)*6."""
    gg = np.einsum
    # g^{d(b} g^{c)e}: symmetric in b, c
    db_ce = 0.5 * (gg('db,ce->bcde', g_inv, g_inv) + gg('dc,be->bcde', g_inv, g_inv))
    db_cf = 0.5 * (gg('db,cf->bcdf', g_inv, g_inv) + gg('dc,bf->bcdf', g_inv, g_inv))
    eb_cf = 0.5 * (gg('eb,cf->bcef', g_inv, g_inv) + gg('ec,bf->bcef', g_inv, g_inv))
    ae_fd = 0.5 * (gg('ae,fd->adef', g_inv, g_inv) + gg('af,ed->adef', g_inv, g_inv))
    db_ca = 0.5 * (gg('db,ca->abcd', g_inv, g_inv) + gg('dc,ba->abcd', g_inv, g_inv))

    tensor = (gg('ad,bc,ef->abcdef', g_inv, g_inv, g_inv)
              + gg('af,bcde->abcdef', g_inv, db_ce)
              + gg('bcdf,ae->abcdef', db_cf, g_inv)
              - gg('ad,bcef->abcdef', g_inv, eb_cf)
              - gg('adef,bc->abcdef', ae_fd, g_inv)
              - gg('abcd,ef->abcdef', db_ca, g_inv))
    return 0.25 * tensor


def s_tensor(g_inv: np.ndarray, cosmological_constant: float) -> np.ndarray:
    """S^abcd = Lambda/4 (g^ac g^bd + g^bc g^ad - g^ab g^cd)."""
    return 0.25 * cosmological_constant * (
        np.einsum('ac,bd->abcd', g_inv, g_inv)
        + np.einsum('bc,ad->abcd', g_inv, g_inv)
        - np.einsum('ab,cd->abcd', g_inv, g_inv)
    )


@dataclass(frozen=True)
class CoefficientTensors:
    """Pointwise evaluators of T and S for a background with cosmological constant Lambda."""
    cosmological_constant: float

    def T(self, point: GeometryPoint) -> np.ndarray:
        return t_tensor(point.g_inv)

    def S(self, point: GeometryPoint) -> np.ndarray:
        return s_tensor(point.g_inv, self.cosmological_constant)

    @classmethod
    def for_background(cls, bg: Background) -> 'CoefficientTensors':
        return cls(bg.cosmological_constant)


def s_contraction(bg: Background, gamma: SymField2) -> np.ndarray:
    """S^abcd gamma_cd over the whole grid, shape (4, 4, nt, nx)."""
    lam = bg.cosmological_constant
    g_inv = bg.g_inv
    full = gamma.full()
    raised = np.einsum('act,bdt,cdtx->abtx', g_inv, g_inv, full)
    tr = np.einsum('cdt,cdtx->tx', g_inv, full)
    return 0.25 * lam * (2.0 * raised - g_inv[:, :, :, None] * tr)


def momentum_from_coefficients(bg: Background, gamma: SymField2) -> np.ndarray:
    """2 T^abcdef nabla_d gamma_ef, evaluated one time layer at a time."""
    first = covariant_derivative(bg, gamma).data
    out = np.zeros((4, 4, 4) + bg.grid.shape, dtype=first.dtype)
    for j in range(bg.grid.nt):
        tensor = t_tensor(bg.g_inv[:, :, j])
        out[..., j, :] = 2.0 * np.einsum('abcdef,defx->abcx', tensor, first[..., j, :])
    return out
