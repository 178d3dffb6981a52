"""
Constructive gauge transformations of metric perturbations.

Every transform returns the generating vector w together with
gamma' = gamma + Lie_w g, so the transformed field and the input always
differ by an exact discrete Lie derivative.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Union

import numpy as np
from scipy.interpolate import CubicSpline

from src.background.spacetime import Background
from src.fields.calculus import (
    covariant_derivative, d_t, d_x, divergence, lie_derivative_metric, raise_index,
    trace, trace_reverse,
)
from src.fields.tensors import DIM, SymField2, VecField
from src.greens.evolver import Direction, LevelOperator, WaveOperator
from src.linop.operators import lichnerowicz
from src.linop.residuals import de_donder_residual, solution_tolerance, trace_residual
from src.utils.common import interior_max
from src.utils.errors import ContractError, UnsupportedBackgroundError
from src.utils.logging_config import get_logger, log_performance

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class GaugeResult:
    """Transformed field, generating vector and named residual norms."""
    transformed: SymField2
    w: VecField
    residual_report: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'residual_report': dict(self.residual_report),
            'gauge_vector_max': self.w.norm(),
            'transformed_max': self.transformed.norm(),
        }


def gauge_shift(bg: Background, gamma: SymField2, w: VecField) -> SymField2:
    """gamma + Lie_w g."""
    return gamma + lie_derivative_metric(bg, w)


def _central_slice(bg: Background, sigma: Optional[int]) -> int:
    sigma = bg.grid.nt // 2 if sigma is None else sigma
    if not 2 <= sigma <= bg.grid.nt - 3:
        raise ValueError(f"slice {sigma} is not in the grid interior")
    return sigma


# ============================================================================
# de Donder Gauge
# ============================================================================

def de_donder_gauge_vector(bg: Background, gamma: SymField2, sigma: Optional[int] = None) -> VecField:
    """
    Solve (box + Lambda) w^b = -nabla^a gamma_bar_a^b with zero data on slice sigma.
    """
    sigma = _central_slice(bg, sigma)
    gamma_bar, _ = trace_reverse(bg, gamma)
    source = raise_index(bg, -divergence(bg, gamma_bar))
    level_op = LevelOperator(bg, WaveOperator.VECTOR_BOX_LAMBDA, "u")
    zero = np.zeros((DIM, bg.grid.nx), dtype=np.result_type(source.data, float))
    data = level_op.evolve_from(sigma, zero, zero, source.data, Direction.BOTH)
    return VecField(bg.grid, data, "u")


@log_performance
def to_de_donder(bg: Background, gamma: SymField2, sigma: Optional[int] = None) -> GaugeResult:
    """Gauge transform into de Donder gauge, nabla^a gamma_bar_ab = 0."""
    w = de_donder_gauge_vector(bg, gamma, sigma)
    transformed = gauge_shift(bg, gamma, w)
    report = {
        'de_donder_before': de_donder_residual(bg, gamma),
        'de_donder_after': de_donder_residual(bg, transformed),
    }
    logger.debug(f"🧭 de Donder gauge: residual {report['de_donder_before']:.3e} -> "
                 f"{report['de_donder_after']:.3e}")
    return GaugeResult(transformed, w, report)


# ============================================================================
# Transverse-Traceless Gauge
# ============================================================================

def _require_de_sitter(bg: Background, operation: str) -> None:
    if bg.cosmological_constant == 0.0:
        raise UnsupportedBackgroundError(
            f"{operation} needs Lambda != 0; on Lambda = 0 backgrounds use tt_obstruction",
            background=bg.spec.kind.value,
        )


def tt_slice_constraints(bg: Background, gamma: SymField2, w: VecField, sigma: int) -> Dict[str, float]:
    """
    Slice conditions satisfied by the TT gauge vector:
    -nabla^a w_a - tr/2 = 0 and D^i E_i + 2 Lambda n^a w_a - n^a nabla_a tr / 2 = 0
    with E_i = n^b (nabla_i w_b - nabla_b w_i).
    """
    lam = bg.cosmological_constant
    tr = trace(bg, gamma).data
    a = bg.a[sigma]
    first = covariant_derivative(bg, w).data  # [c, b]
    div_w = np.einsum('cbt,cbtx->tx', bg.g_inv, first)
    gauge_condition = -div_w[sigma] - 0.5 * tr[sigma]

    electric = (first[1, 0] - first[0, 1]) / bg.a[:, None]
    div_electric = d_x(electric, bg.grid.dx)[sigma] / a ** 2
    normal_w = w.data[0, sigma] / a
    normal_trace = d_t(tr, bg.grid.dt)[sigma] / a
    normal_condition = div_electric + 2.0 * lam * normal_w - 0.5 * normal_trace
    return {
        'tt_gauge_condition': float(np.max(np.abs(gauge_condition))),
        'tt_normal_condition': float(np.max(np.abs(normal_condition))),
    }


def tt_gauge_vector(bg: Background, gamma: SymField2) -> VecField:
    """w_a = nabla_a tr(gamma) / (4 Lambda)."""
    _require_de_sitter(bg, "TT gauge vector")
    gradient = covariant_derivative(bg, trace(bg, gamma)).data
    return VecField(bg.grid, gradient / (4.0 * bg.cosmological_constant), "d")


@log_performance
def to_transverse_traceless(bg: Background, gamma: SymField2, sigma: Optional[int] = None,
                            check_preconditions: bool = True,
                            tolerance: Optional[float] = None) -> GaugeResult:
    """
    Transverse-traceless gauge for a de Donder solution on a Lambda != 0 chart.

    Preconditions: the de Donder residual and the interior norm of P(gamma_bar)
    are below ``tolerance`` (by default the solution tolerance of the grid).
    """
    _require_de_sitter(bg, "to_transverse_traceless")
    sigma = _central_slice(bg, sigma)
    gamma_bar, _ = trace_reverse(bg, gamma)
    before = {
        'de_donder_before': de_donder_residual(bg, gamma),
        'wave_equation_before': interior_max(lichnerowicz(bg, gamma_bar).components),
        'trace_before': trace_residual(bg, gamma),
    }
    if check_preconditions:
        limit = solution_tolerance(bg, interior_max(gamma.components)) if tolerance is None else tolerance
        worst = max(before['de_donder_before'], before['wave_equation_before'])
        if worst > limit:
            logger.warning(f"⚠️ TT gauge precondition failed: residual {worst:.3e} > {limit:.3e}")
            raise ContractError(
                "to_transverse_traceless requires a de Donder solution",
                measured=worst, tolerance=limit, **before,
            )

    w = tt_gauge_vector(bg, gamma)
    transformed = gauge_shift(bg, gamma, w)
    report = dict(before)
    report['trace_after'] = trace_residual(bg, transformed)
    report['de_donder_after'] = de_donder_residual(bg, transformed)
    report.update(tt_slice_constraints(bg, gamma, w, sigma))
    logger.debug(f"🎯 TT gauge: trace {report['trace_before']:.3e} -> {report['trace_after']:.3e}")
    return GaugeResult(transformed, w, report)


def tt_obstruction(bg: Background, gamma: SymField2, sigma: int) -> Union[float, complex]:
    """
    Integral over the slice of n^a nabla_a tr(gamma) sqrt(h) dx.

    Only defined on Lambda = 0 charts, where it must vanish for TT gauge to be
    reachable by a spacelike-compact gauge vector. The integral is linear, so
    complex fields give the complex combination of the real and imaginary
    obstructions.
    """
    if bg.cosmological_constant != 0.0:
        raise UnsupportedBackgroundError(
            "tt_obstruction is defined on Lambda = 0 backgrounds; use to_transverse_traceless",
            background=bg.spec.kind.value,
        )
    if not 1 <= sigma <= bg.grid.nt - 2:
        raise ValueError(f"slice {sigma} is not in the grid interior")
    tr = trace(bg, gamma).data
    normal_derivative = d_t(tr, bg.grid.dt)[sigma] / bg.a[sigma]
    value = np.sum(normal_derivative * bg.sqrt_h[sigma]) * bg.grid.dx
    return complex(value) if np.iscomplexobj(value) else float(value)


# ============================================================================
# Synchronous Gauge
# ============================================================================

def _synchronous_rhs(bg: Background, splines, t: float, state: np.ndarray) -> np.ndarray:
    """d/dt of (W0, w_1, w_2, w_3) along the comoving timelines."""
    a, A = bg.scale_factor(t)
    a, A = float(a), float(A)
    gamma_time = [spline(t) for spline in splines]  # gamma_00, gamma_01, gamma_02, gamma_03
    rate = np.empty_like(state)
    rate[0] = -gamma_time[0] / (2.0 * a)
    shift_gradient = a * d_x(state[0], bg.grid.dx)
    for i in range(1, DIM):
        rate[i] = 2.0 * A * state[i] - gamma_time[i]
    rate[1] = rate[1] - shift_gradient
    return rate


def synchronous_gauge_vector(bg: Background, gamma: SymField2, sigma: Optional[int] = None) -> VecField:
    """
    Integrate the synchronous-gauge ODEs with fourth-order Runge-Kutta from zero
    data on slice sigma; intermediate stages interpolate gamma with cubic splines.
    """
    grid = bg.grid
    sigma = _central_slice(bg, sigma)
    splines = [CubicSpline(grid.t, gamma.component(0, b), axis=0) for b in range(DIM)]
    dtype = np.result_type(gamma.components, float)
    states = np.zeros((grid.nt, DIM, grid.nx), dtype=dtype)

    def advance(j_from: int, j_to: int) -> None:
        t0, t1 = grid.t[j_from], grid.t[j_to]
        h = t1 - t0
        y = states[j_from]
        k1 = _synchronous_rhs(bg, splines, t0, y)
        k2 = _synchronous_rhs(bg, splines, t0 + 0.5 * h, y + 0.5 * h * k1)
        k3 = _synchronous_rhs(bg, splines, t0 + 0.5 * h, y + 0.5 * h * k2)
        k4 = _synchronous_rhs(bg, splines, t1, y + h * k3)
        states[j_to] = y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0

    for j in range(sigma, grid.nt - 1):
        advance(j, j + 1)
    for j in range(sigma, 0, -1):
        advance(j, j - 1)

    data = np.moveaxis(states, 0, 1).copy()  # (4, nt, nx)
    data[0] = bg.a[:, None] * data[0]
    return VecField(grid, data, "d")


def synchronous_residual(bg: Background, gamma: SymField2, margin: int = 2) -> float:
    """Interior max of n^a gamma_ab."""
    normal = np.stack([gamma.component(0, b) for b in range(DIM)]) / bg.a[None, :, None]
    return interior_max(normal, margin)


@log_performance
def to_synchronous(bg: Background, gamma: SymField2, sigma: Optional[int] = None) -> GaugeResult:
    """Gauge transform to n^a gamma'_ab = 0 along the comoving timelines."""
    w = synchronous_gauge_vector(bg, gamma, sigma)
    transformed = gauge_shift(bg, gamma, w)
    report = {
        'synchronous_before': synchronous_residual(bg, gamma),
        'synchronous_after': synchronous_residual(bg, transformed),
    }
    logger.debug(f"⏱️ Synchronous gauge: residual {report['synchronous_before']:.3e} -> "
                 f"{report['synchronous_after']:.3e}")
    return GaugeResult(transformed, w, report)
