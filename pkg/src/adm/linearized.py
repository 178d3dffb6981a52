"""
Linearized constraint map DPhi, its adjoint with respect to the slice inner
products, the U map, the ADM symplectic product and pure-gauge data.

The momentum component of DPhi is normalized as the derivative of
2 D_b(varpi^ab / sqrt(h)); the adjoint below is the adjoint of that map.
"""

from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

from src.adm.geometry import SliceGeometry
from src.adm.state import ADMPerturbation, ADMState, constraints
from src.utils.config import get_tolerances
from src.utils.errors import ContractError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

SYMMETRIC_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))

ConstraintPair = Tuple[np.ndarray, np.ndarray]


class ConstraintForm(Enum):
    """Which display of the linearized Hamiltonian constraint to evaluate."""
    GENERAL = "general"
    CONSTRAINT_SURFACE = "constraint_surface"


# ============================================================================
# Shared Contractions
# ============================================================================

def _varpi_pieces(geometry: SliceGeometry, varpi: np.ndarray):
    varpi_low = geometry.lower_pair(varpi)
    square = np.einsum('abx,abx->x', varpi, varpi_low)
    trace_varpi = geometry.trace(varpi, upper=True)
    return varpi_low, square, trace_varpi


def _divergence_of_density(geometry: SliceGeometry, density: np.ndarray) -> np.ndarray:
    """D_b d^ab for a weight-one density d^ab."""
    tensor = density / geometry.sqrt_h
    return geometry.sqrt_h * np.einsum('babx->ax', geometry.covariant_derivative(tensor, "uu"))


def _hessian_trace_terms(geometry: SliceGeometry, gamma3: np.ndarray) -> np.ndarray:
    """D^a D^b gamma_ab - D^a D_a gamma."""
    first = geometry.covariant_derivative(gamma3, "dd")
    second = geometry.covariant_derivative(first, "ddd")
    double_div = np.einsum('dax,cbx,dcabx->x', geometry.h_inv, geometry.h_inv, second)
    trace = geometry.trace(gamma3)
    trace_second = geometry.covariant_derivative(geometry.covariant_derivative(trace, ""), "d")
    laplacian = np.einsum('dcx,dcx->x', geometry.h_inv, trace_second)
    return double_div - laplacian


def _default_tolerance(state: ADMState) -> float:
    _, square, _ = _varpi_pieces(state.geometry, state.varpi)
    scale = 1.0 + 2.0 * abs(state.cosmological_constant) + float(np.max(np.abs(square / state.sqrt_h ** 2)))
    return get_tolerances().floor_factor * state.dx ** 2 * scale


def constraint_violation(state: ADMState) -> float:
    hamiltonian, momentum = constraints(state)
    return float(max(np.max(np.abs(hamiltonian)), np.max(np.abs(momentum))))


# ============================================================================
# Linearized Constraints
# ============================================================================

def linearized_constraints(state: ADMState, pert: ADMPerturbation,
                           form: ConstraintForm = ConstraintForm.CONSTRAINT_SURFACE,
                           tolerance: Optional[float] = None) -> ConstraintPair:
    """
    (DH, D delta) applied to (gamma3, p).

    The constraint-surface form requires Phi(state) to vanish within
    ``tolerance``; the general form is the exact derivative of Phi at any
    state.
    """
    if isinstance(form, str):
        form = ConstraintForm(form)
    if pert.nx != state.nx:
        raise ValueError(f"perturbation has nx={pert.nx}, state has nx={state.nx}")
    geometry = state.geometry
    if form is ConstraintForm.CONSTRAINT_SURFACE:
        violation = constraint_violation(state)
        limit = _default_tolerance(state) if tolerance is None else tolerance
        if violation > limit:
            raise ContractError(
                "constraint-surface form of DPhi requires a state on the constraint surface",
                measured=violation, tolerance=limit,
            )

    gamma3, p = pert.gamma3, pert.p
    det = geometry.sqrt_h ** 2
    varpi = state.varpi
    varpi_low, square, trace_varpi = _varpi_pieces(geometry, varpi)
    trace_gamma = geometry.trace(gamma3)
    trace_p = geometry.trace(p, upper=True)
    varpi_squared = np.einsum('acx,cdx,dbx->abx', varpi, geometry.h, varpi)

    kinetic = square - 0.5 * trace_varpi ** 2
    momentum_part = 2.0 * (np.einsum('abx,abx->x', varpi_low, p) - 0.5 * trace_varpi * trace_p)
    quadratic = 2.0 * np.einsum('abx,abx->x', varpi_squared - 0.5 * trace_varpi * varpi, gamma3)
    ricci_up = geometry.raise_pair(geometry.ricci)
    derivative_part = _hessian_trace_terms(geometry, gamma3)

    if form is ConstraintForm.GENERAL:
        hamiltonian = ((-kinetic * trace_gamma + momentum_part + quadratic) / det
                       - (derivative_part - np.einsum('abx,abx->x', ricci_up, gamma3)))
    else:
        einstein_up = (ricci_up - 0.5 * geometry.h_inv * geometry.ricci_scalar
                       + state.cosmological_constant * geometry.h_inv)
        hamiltonian = ((-0.5 * kinetic * trace_gamma + momentum_part + quadratic) / det
                       - (derivative_part - np.einsum('abx,abx->x', einstein_up, gamma3)))

    first = geometry.covariant_derivative(gamma3, "dd")        # D_c gamma_db
    mixed = np.einsum('adx,cdbx->cabx', geometry.h_inv, first)  # D_c gamma^a_b
    gradient_up = np.einsum('adx,dbcx->abcx', geometry.h_inv, first)  # D^a gamma_bc
    connection_part = (np.einsum('bcx,cabx->ax', varpi, mixed)
                       + np.einsum('bcx,bacx->ax', varpi, mixed)
                       - np.einsum('bcx,abcx->ax', varpi, gradient_up))
    momentum = (2.0 * _divergence_of_density(geometry, p) + connection_part) / geometry.sqrt_h
    if form is ConstraintForm.GENERAL:
        _, momentum_constraint = constraints(state)
        momentum = momentum - trace_gamma * momentum_constraint
    return hamiltonian, momentum


def constraint_difference_quotient(state: ADMState, pert: ADMPerturbation,
                                   epsilon: float = 1e-4) -> ConstraintPair:
    """
    Central difference of Phi along the perturbation, with the momentum part
    scaled to the normalization of linearized_constraints.
    """
    plus = ADMState(state.h + epsilon * pert.gamma3, state.varpi + epsilon * pert.p,
                    state.cosmological_constant, state.dx)
    minus = ADMState(state.h - epsilon * pert.gamma3, state.varpi - epsilon * pert.p,
                     state.cosmological_constant, state.dx)
    h_plus, d_plus = constraints(plus)
    h_minus, d_minus = constraints(minus)
    return (h_plus - h_minus) / (2.0 * epsilon), (d_plus - d_minus) / epsilon


# ============================================================================
# Adjoint
# ============================================================================

def adjoint_dphi(state: ADMState, f: np.ndarray,
                 V: np.ndarray) -> Tuple[ADMPerturbation, ADMPerturbation]:
    """
    (DH*(f), D delta*(V)), each as an (alpha_ab, beta^ab) pair with beta a
    density. ``V`` carries an upper index, shape (3, nx).
    """
    geometry = state.geometry
    h, h_inv, sqrt_h = geometry.h, geometry.h_inv, geometry.sqrt_h
    det = sqrt_h ** 2
    varpi = state.varpi
    varpi_low, square, trace_varpi = _varpi_pieces(geometry, varpi)
    varpi_squared_low = np.einsum('acx,cdx,dbx->abx', varpi_low, h_inv, varpi_low)

    hessian = geometry.covariant_derivative(geometry.covariant_derivative(f, ""), "d")
    laplacian = np.einsum('abx,abx->x', h_inv, hessian)
    einstein_low = (geometry.ricci - 0.5 * h * geometry.ricci_scalar
                    + state.cosmological_constant * h)
    alpha = ((-0.5 * (square - 0.5 * trace_varpi ** 2) * h * f
              + 2.0 * (varpi_squared_low - 0.5 * varpi_low * trace_varpi) * f) / det
             - (hessian - h * laplacian - einstein_low * f))
    beta = 2.0 * f * (varpi - 0.5 * trace_varpi * h_inv)

    transport = V[:, None, None, :] * varpi_low[None] / sqrt_h     # V^c varpi_ab / sqrt(h)
    transport_div = np.einsum('ccabx->abx', geometry.covariant_derivative(transport, "udd"))
    V_low = np.einsum('abx,bx->ax', h, V)
    grad_low = geometry.covariant_derivative(V_low, "d")            # D_c V_b
    varpi_mixed = np.einsum('adx,dcx->cax', h, varpi)               # varpi^c_a
    twist = np.einsum('cax,cbx->abx', varpi_mixed, grad_low)
    alpha_shift = transport_div - (twist + np.swapaxes(twist, 0, 1)) / sqrt_h
    grad_up = np.einsum('acx,cbx->abx', h_inv, geometry.covariant_derivative(V, "u"))
    beta_shift = -sqrt_h * (grad_up + np.swapaxes(grad_up, 0, 1))

    return ADMPerturbation(alpha, beta), ADMPerturbation(alpha_shift, beta_shift)


def adjoint_total(state: ADMState, f: np.ndarray, V: np.ndarray) -> ADMPerturbation:
    hamiltonian_part, momentum_part = adjoint_dphi(state, f, V)
    return hamiltonian_part + momentum_part


# ============================================================================
# Inner Products, U and the ADM Symplectic Product
# ============================================================================

def domain_inner(state: ADMState, x: ADMPerturbation, y: ADMPerturbation) -> complex:
    """<(gamma, p); (gamma~, p~)> with the sqrt(h) weights of the two slots."""
    geometry = state.geometry
    metric_part = np.einsum('abx,abx->x', x.gamma3, geometry.raise_pair(y.gamma3)) * geometry.sqrt_h
    momentum_part = np.einsum('abx,abx->x', geometry.lower_pair(x.p), y.p) / geometry.sqrt_h
    return geometry.integrate(metric_part + momentum_part)


def codomain_inner(state: ADMState, x: ConstraintPair, y: ConstraintPair) -> complex:
    """<<(f, V); (f~, V~)>> over the slice volume."""
    geometry = state.geometry
    f, V = x
    f_other, V_other = y
    density = (f * f_other + np.einsum('abx,ax,bx->x', geometry.h, V, V_other)) * geometry.sqrt_h
    return geometry.integrate(density)


def u_map(state: ADMState, pert: ADMPerturbation) -> ADMPerturbation:
    """U(gamma, p) = (-p_flat_flat / sqrt(h), sqrt(h) gamma_sharp_sharp)."""
    geometry = state.geometry
    return ADMPerturbation(-geometry.lower_pair(pert.p) / geometry.sqrt_h,
                           geometry.sqrt_h * geometry.raise_pair(pert.gamma3))


def u_inverse(state: ADMState, pert: ADMPerturbation) -> ADMPerturbation:
    """U^-1(gamma, p) = (p_flat_flat / sqrt(h), -sqrt(h) gamma_sharp_sharp)."""
    geometry = state.geometry
    return ADMPerturbation(geometry.lower_pair(pert.p) / geometry.sqrt_h,
                           -geometry.sqrt_h * geometry.raise_pair(pert.gamma3))


def adm_symplectic(state: ADMState, pert1: ADMPerturbation, pert2: ADMPerturbation) -> complex:
    """int (gamma1_ab p2^ab - gamma2_ab p1^ab) d^3x; p is a density."""
    pert1._check(pert2)
    density = (np.einsum('abx,abx->x', pert1.gamma3, pert2.p)
               - np.einsum('abx,abx->x', pert2.gamma3, pert1.p))
    return state.geometry.integrate(density)


def symplectic_inner_identity(state: ADMState, x: ADMPerturbation,
                              y: ADMPerturbation) -> Tuple[complex, complex]:
    """Both sides of omega_ADM(x; y) = <x; U^-1 y>."""
    return adm_symplectic(state, x, y), domain_inner(state, x, u_inverse(state, y))


# ============================================================================
# Pure Gauge Data and the Kernel of DPhi
# ============================================================================

def pure_gauge_data(state: ADMState, C: np.ndarray, X: np.ndarray) -> ADMPerturbation:
    """U(DPhi*(C, X)): slice data of Lie_w g with normal part C and tangential part X."""
    return u_map(state, adjoint_total(state, C, X))


def _fourier_profiles(nx: int, modes: int) -> np.ndarray:
    x = 2.0 * np.pi * np.arange(nx) / nx
    rows = [np.ones(nx)]
    for m in range(1, modes + 1):
        rows.append(np.cos(m * x))
        rows.append(np.sin(m * x))
    return np.array(rows)


def _basis_perturbation(nx: int, slot: int, profile: np.ndarray) -> ADMPerturbation:
    pert = ADMPerturbation.zeros(nx)
    target = pert.gamma3 if slot < len(SYMMETRIC_PAIRS) else pert.p
    a, b = SYMMETRIC_PAIRS[slot % len(SYMMETRIC_PAIRS)]
    target[a, b] = profile
    target[b, a] = profile
    return pert


def project_kernel(state: ADMState, pert: ADMPerturbation, modes: int = 4,
                   form: ConstraintForm = ConstraintForm.CONSTRAINT_SURFACE) -> ADMPerturbation:
    """
    Subtract the least-squares part of the perturbation that DPhi sees, within
    a band-limited Fourier basis of the twelve slice components.
    """
    nx = pert.nx
    profiles = _fourier_profiles(nx, modes)
    basis, columns = [], []
    for slot in range(2 * len(SYMMETRIC_PAIRS)):
        for profile in profiles:
            probe = _basis_perturbation(nx, slot, profile)
            hamiltonian, momentum = linearized_constraints(state, probe, form)
            basis.append(probe)
            columns.append(np.concatenate([hamiltonian, momentum.ravel()]))
    matrix = np.stack(columns, axis=1)
    hamiltonian, momentum = linearized_constraints(state, pert, form)
    target = np.concatenate([hamiltonian, momentum.ravel()])
    coefficients, *_ = linalg.lstsq(matrix, target)
    correction = ADMPerturbation.zeros(nx, dtype=np.result_type(coefficients, pert.gamma3))
    for coefficient, probe in zip(coefficients, basis):
        if coefficient != 0.0:
            correction = correction + probe * coefficient
    projected = pert - correction
    logger.debug(f"🧹 Projected onto ker DPhi: {np.max(np.abs(target)):.3e} -> "
                 f"{max(np.max(np.abs(part)) for part in linearized_constraints(state, projected, form)):.3e}")
    return projected

