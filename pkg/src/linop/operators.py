"""
Differential operators on metric perturbations.

All operators compose the nested second-order covariant derivatives of
``src.fields.calculus``; index conventions follow that module (derivative
indices first).
"""

from typing import Tuple

import numpy as np

from src.background.spacetime import Background
from src.fields.calculus import (
    box, covariant_derivative, divergence, raise_all, second_covariant_derivative,
    trace_reverse,
)
from src.fields.tensors import (
    RankTwo, ScalarField, SymField2, TensorField, VecField, as_tensor,
)
from src.linop.coefficients import s_contraction

_SYMMETRIZERS = ((1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1))


def _time_metric(bg: Background) -> np.ndarray:
    """g_ab with a broadcastable x axis."""
    return bg.g[:, :, :, None]


def linearized_einstein(bg: Background, gamma: SymField2) -> SymField2:
    """
    Linearized Einstein tensor of a symmetric perturbation:

    L_ab = -1/2 g_ab (nabla^c nabla^d gamma_cd - box gamma - Lambda gamma)
           - Lambda gamma_ab - 1/2 box gamma_ab - 1/2 nabla_a nabla_b gamma
           + nabla^c nabla_(a gamma_b)c
    """
    lam = bg.cosmological_constant
    g_inv = bg.g_inv
    full = gamma.full()
    second = second_covariant_derivative(bg, gamma).data  # [d, c, a, b]

    div_div = np.einsum('cet,dft,efcdtx->tx', g_inv, g_inv, second)
    box_gamma = np.einsum('cdt,cdabtx->abtx', g_inv, second)
    hess_trace = np.einsum('cdt,abcdtx->abtx', g_inv, second)
    box_trace = np.einsum('abt,abtx->tx', g_inv, hess_trace)
    mixed = np.einsum('cdt,dabctx->abtx', g_inv, second)
    tr = np.einsum('abt,abtx->tx', g_inv, full)

    result = (-0.5 * _time_metric(bg) * (div_div - box_trace - lam * tr)
              - lam * full - 0.5 * box_gamma - 0.5 * hess_trace
              + 0.5 * (mixed + np.swapaxes(mixed, 0, 1)))
    return SymField2.from_full(bg.grid, result)


def linearized_einstein_general(bg: Background, perturbation: RankTwo) -> SymField2:
    """
    Linearized Einstein tensor for an arbitrary (0,2) perturbation.

    Only the symmetric part of the perturbation contributes; the fully
    symmetrized third term makes the operator vanish on antisymmetric input.
    """
    lam = bg.cosmological_constant
    g_inv = bg.g_inv
    tensor = as_tensor(perturbation)
    if tensor.variance != "dd":
        raise ValueError(f"expected a (0,2) perturbation, got {tensor.variance!r}")
    full = tensor.data
    sym = 0.5 * (full + np.swapaxes(full, 0, 1))
    second = second_covariant_derivative(bg, tensor).data  # [d, a, b, c]
    second_sym = 0.5 * (second + np.swapaxes(second, 2, 3))

    div_div = np.einsum('cet,dft,efcdtx->tx', g_inv, g_inv, second_sym)
    box_sym = np.einsum('cdt,cdabtx->abtx', g_inv, second_sym)
    hess_trace = np.einsum('cdt,abcdtx->abtx', g_inv, second_sym)
    box_trace = np.einsum('abt,abtx->tx', g_inv, hess_trace)
    tr = np.einsum('abt,abtx->tx', g_inv, sym)

    fully_symmetric = sum(np.transpose(second, (0,) + perm + (4, 5)) for perm in _SYMMETRIZERS) / 6.0
    outer = np.einsum('cdt,dabctx->abtx', g_inv, fully_symmetric)

    result = (-0.5 * _time_metric(bg) * (div_div - box_trace - lam * tr)
              - lam * sym - box_sym - 0.5 * hess_trace + 1.5 * outer)
    return SymField2.from_full(bg.grid, result)


def riemann_action(bg: Background, full: np.ndarray) -> np.ndarray:
    """R^c_ab^d gamma_cd for a (4, 4, nt, nx) component array."""
    return np.einsum('cet,eabdt,cdtx->abtx', bg.g_inv, bg.riemann, full)


def lichnerowicz(bg: Background, gamma: SymField2) -> SymField2:
    """P gamma = box gamma_ab - 2 R^c_ab^d gamma_cd."""
    box_gamma = box(bg, gamma).data
    return SymField2.from_full(bg.grid, box_gamma - 2.0 * riemann_action(bg, gamma.full()))


def vector_wave(bg: Background, w: VecField) -> VecField:
    """(box + Lambda) w for a vector or covector."""
    return VecField(bg.grid, box(bg, w).data + bg.cosmological_constant * w.data, w.variance)


def scalar_wave(bg: Background, phi: ScalarField) -> ScalarField:
    """(box + 2 Lambda) phi."""
    return ScalarField(bg.grid, box(bg, phi).data + 2.0 * bg.cosmological_constant * phi.data)


def de_donder_vector(bg: Background, gamma: SymField2) -> VecField:
    """Covector nabla^a gamma_bar_ab."""
    gamma_bar, _ = trace_reverse(bg, gamma)
    return divergence(bg, gamma_bar)


def _gradient_pieces(bg: Background, gamma: SymField2):
    g_inv = bg.g_inv
    first = covariant_derivative(bg, gamma)  # [c, a, b]
    first_up = raise_all(bg, first).data
    grad_trace = np.einsum('bct,dbctx->dtx', g_inv, first.data)
    grad_trace_up = np.einsum('adt,dtx->atx', g_inv, grad_trace)
    div_low = np.einsum('dft,dfetx->etx', g_inv, first.data)
    div_up = np.einsum('aet,etx->atx', g_inv, div_low)
    return first_up, grad_trace_up, div_up


def conjugate_momentum(bg: Background, gamma: SymField2) -> Tuple[TensorField, TensorField]:
    """
    Covariant conjugate momentum Pi^abc (derivative index first) and the slice
    momentum pi^ab = -n_c Pi^cab.
    """
    g_inv = bg.g_inv
    first_up, grad_trace_up, div_up = _gradient_pieces(bg, gamma)

    momentum = (-0.5 * first_up
                + 0.5 * np.einsum('bct,atx->abctx', g_inv, grad_trace_up)
                - 0.5 * np.einsum('bct,atx->abctx', g_inv, div_up)
                - 0.25 * np.einsum('act,btx->abctx', g_inv, grad_trace_up)
                - 0.25 * np.einsum('abt,ctx->abctx', g_inv, grad_trace_up)
                + 0.5 * np.transpose(first_up, (1, 0, 2, 3, 4))
                + 0.5 * np.transpose(first_up, (1, 2, 0, 3, 4)))
    slice_momentum = -np.einsum('ct,cabtx->abtx', bg.n_down, momentum)
    return (TensorField(bg.grid, momentum, "uuu"),
            TensorField(bg.grid, slice_momentum, "uu"))


def dee_operator(bg: Background, gamma: SymField2) -> TensorField:
    """D^cab = 1/2 nabla^c gamma^ab - 1/2 nabla^b gamma^ca - 1/2 nabla^a gamma^cb."""
    first_up = raise_all(bg, covariant_derivative(bg, gamma)).data
    data = 0.5 * (first_up
                  - np.transpose(first_up, (1, 2, 0, 3, 4))
                  - np.transpose(first_up, (1, 0, 2, 3, 4)))
    return TensorField(bg.grid, data, "uuu")


def euler_lagrange_residual(bg: Background, gamma: SymField2) -> TensorField:
    """nabla_c Pi^cab - 2 S^abcd gamma_cd - L^ab, vanishing off-shell."""
    momentum, _ = conjugate_momentum(bg, gamma)
    einstein_up = raise_all(bg, linearized_einstein(bg, gamma)).data
    data = divergence(bg, momentum).data - 2.0 * s_contraction(bg, gamma) - einstein_up
    return TensorField(bg.grid, data, "uu")
