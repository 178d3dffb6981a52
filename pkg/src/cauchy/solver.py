"""
Hyperbolic evolution of P(gamma) = s from Cauchy data, the existence
pipeline for the linearized Einstein equation and constraint projection.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from scipy import linalg

from src.background.spacetime import Background
from src.cauchy.data import (
    CauchyData, ConstraintValue, coordinate_rate, constraint, data_extension, extract_data,
)
from src.fields.calculus import lie_derivative_metric, trace_reverse, divergence
from src.fields.tensors import COMPONENT_ORDER, SymField2
from src.gauge.transforms import de_donder_gauge_vector
from src.greens.evolver import Direction, LevelOperator, WaveOperator
from src.linop.operators import linearized_einstein
from src.linop.residuals import de_donder_residual, field_equation_residual, solution_tolerance
from src.utils.common import interior_max
from src.utils.errors import ContractError, SupportError
from src.utils.logging_config import get_logger, log_performance

logger = get_logger(__name__)


def _check_source_layers(source: SymField2, sigma: int, direction: Direction) -> None:
    layers = {
        Direction.FORWARD: (sigma, sigma + 1),
        Direction.BACKWARD: (sigma - 1, sigma),
        Direction.BOTH: (sigma - 1, sigma, sigma + 1),
    }[direction]
    leak = max(float(np.max(np.abs(source.components[:, j]))) for j in layers)
    if leak != 0.0:
        raise SupportError(
            f"source is nonzero ({leak:.3e}) on the initialization layers of slice {sigma}",
            sigma=sigma, leak=leak,
        )


@log_performance
def evolve(bg: Background, data: CauchyData, source: Optional[SymField2] = None,
           direction: Direction = Direction.FORWARD) -> SymField2:
    """
    Leapfrog solution of P(gamma) = source from Cauchy data on slice sigma.

    Levels on the side that is not evolved stay zero.
    """
    if isinstance(direction, str):
        direction = Direction(direction)
    level_op = LevelOperator(bg, WaveOperator.TENSOR_P, "dd")
    if source is None:
        source_data = np.zeros((4, 4) + bg.grid.shape)
    else:
        _check_source_layers(source, data.sigma, direction)
        source_data = source.full()
    value = data.full_value()
    rate = coordinate_rate(bg, value, data.full_velocity(), data.sigma)
    result = level_op.evolve_from(data.sigma, value, rate, source_data, direction)
    return SymField2.from_full(bg.grid, result)


@dataclass(frozen=True, eq=False)
class LinearizedSolution:
    """Solution of L(gamma) = 0 together with its de Donder representative."""
    solution: SymField2
    de_donder_solution: SymField2
    gauge_vector: Any
    report: Dict[str, float] = field(default_factory=dict)


def solve_linearized_detailed(bg: Background, data: CauchyData, check_constraints: bool = True,
                              tolerance: Optional[float] = None) -> LinearizedSolution:
    """
    Existence pipeline: extend the data, move the extension into de Donder
    gauge with a gauge vector vanishing to first order on the slice, evolve the
    de Donder data under P = 0 and undo the gauge transformation.

    The extension is linear in t (``data_extension``); any other extension of
    the same data changes the solution by a pure-gauge field only.
    """
    constraint_norm = constraint(bg, data).norm()
    if check_constraints:
        limit = solution_tolerance(bg, data.norm()) if tolerance is None else tolerance
        if constraint_norm > limit:
            logger.warning(f"⚠️ Cauchy data violates the constraints: {constraint_norm:.3e} > {limit:.3e}")
            raise ContractError(
                "solve_linearized requires constrained Cauchy data",
                measured=constraint_norm, tolerance=limit,
            )

    extension = data_extension(bg, data)
    w = de_donder_gauge_vector(bg, extension, data.sigma)
    gauge_part = lie_derivative_metric(bg, w)
    gauge_data = extract_data(bg, extension + gauge_part, data.sigma)
    de_donder_field = evolve(bg, gauge_data, None, Direction.BOTH)
    solution = de_donder_field - gauge_part

    report = {
        'constraint_norm': constraint_norm,
        'de_donder_residual': de_donder_residual(bg, de_donder_field),
        'field_equation_residual': field_equation_residual(bg, solution),
    }
    logger.info(f"✅ Solved linearized equation from slice {data.sigma}: "
                f"de Donder residual {report['de_donder_residual']:.3e}")
    return LinearizedSolution(solution, de_donder_field, w, report)


def solve_linearized(bg: Background, data: CauchyData, check_constraints: bool = True,
                     tolerance: Optional[float] = None) -> SymField2:
    """Solution of L(gamma) = 0 with Data_sigma(gamma) = data."""
    return solve_linearized_detailed(bg, data, check_constraints, tolerance).solution


# ============================================================================
# Constraint Projection
# ============================================================================

def _fourier_basis(nx: int, modes: int) -> np.ndarray:
    x = 2.0 * np.pi * np.arange(nx) / nx
    rows = [np.ones(nx)]
    for m in range(1, modes + 1):
        rows.append(np.cos(m * x))
        rows.append(np.sin(m * x))
    return np.array(rows)


def project_constraints(bg: Background, data: CauchyData, modes: int = 4) -> CauchyData:
    """
    Remove the least-squares constraint-violating part of the data within a
    band-limited Fourier basis of the twenty slice components.
    """
    nx = data.nx
    basis = _fourier_basis(nx, modes)
    slots = 2 * len(COMPONENT_ORDER)
    perturbations = []
    columns = []
    for slot in range(slots):
        for profile in basis:
            packed = np.zeros((slots, nx))
            packed[slot] = profile
            probe = CauchyData(data.sigma, packed[:len(COMPONENT_ORDER)], packed[len(COMPONENT_ORDER):])
            perturbations.append(probe)
            columns.append(constraint(bg, probe).components.ravel())
    matrix = np.stack(columns, axis=1)
    target = constraint(bg, data).components.ravel()
    coefficients, *_ = linalg.lstsq(matrix, target)
    correction = CauchyData.zeros(data.sigma, nx, dtype=np.result_type(coefficients, data.value))
    for coefficient, probe in zip(coefficients, perturbations):
        if coefficient != 0.0:
            correction = correction + probe * coefficient
    projected = data - correction
    logger.debug(f"🧹 Projected constraints: {np.max(np.abs(target)):.3e} -> "
                 f"{constraint(bg, projected).norm():.3e}")
    return projected


# ============================================================================
# Propagation Diagnostics
# ============================================================================

def de_donder_propagation(bg: Background, gamma: SymField2, sigma: int) -> float:
    """
    max over the slice of n^c nabla_c (nabla . gamma_bar)_b - 2 n^a L_ab.

    Vanishes at truncation order for fields whose de Donder vector is zero on
    the slice.
    """
    gamma_bar, _ = trace_reverse(bg, gamma)
    div = divergence(bg, gamma_bar).data  # covector (4, nt, nx)
    dt = bg.grid.dt
    rate = (div[:, sigma + 1] - div[:, sigma - 1]) / (2.0 * dt)
    # n^c nabla_c of a covector: (d_t v_b - Gamma^e_0b v_e) / a
    conn = np.einsum('eb,ex->bx', bg.christoffel[:, 0, :, sigma], div[:, sigma])
    normal = (rate - conn) / bg.a[sigma]
    einstein = linearized_einstein(bg, gamma).full()
    normal_einstein = np.einsum('a,abx->bx', bg.n_up[:, sigma], einstein[:, :, sigma])
    return float(np.max(np.abs(normal - 2.0 * normal_einstein)))


def constraint_residual(bg: Background, gamma: SymField2, sigma: int) -> ConstraintValue:
    """Constraint map applied to the data of a spacetime field."""
    return constraint(bg, extract_data(bg, gamma, sigma))


def uniqueness_gap(bg: Background, gamma1: SymField2, gamma2: SymField2) -> float:
    """Interior max of the difference of two fields."""
    return interior_max((gamma1 - gamma2).components)
