"""
Verification suites: named invariant checks evaluated at a grid and its
refinement, with observed convergence orders and pass/fail verdicts.
"""

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from src.adm import (
    adjoint_total, adm_symplectic, codomain_inner, constraint_difference_quotient,
    constraint_violation, domain_inner, linearized_constraints, project_kernel, pure_gauge_data,
    slice_background, spacetime_gauge_vector, symplectic_inner_identity,
    synchronous_slice_data, ConstraintForm,
)
from src.algebra import (
    CCRAlgebra, adjoint, commutator, generator, is_null, time_slice_reduce,
)
from src.background import (
    Background, BackgroundKind, BackgroundSpec, Grid, build_background, einstein_residual,
)
from src.cauchy import (
    CauchyData, de_donder_propagation, evolve, extract_data, project_constraints,
    solve_linearized, solve_linearized_detailed, uniqueness_gap,
)
from src.cli.inputs import (
    antisymmetric_bump, bianchi_pair, bump_tensor, gauge_profiles, greens_source,
    plane_wave_pair, random_tensor, random_vector, separation_observables, slice_index,
    slice_perturbation, slice_profiles, symmetric_polarization, wave_vector, window,
)
from src.fields import (
    BumpRecipe, SymField2, VecField, as_tensor, divergence, lie_derivative_metric, metric_field,
    raise_index, support_of, synthesize_field, trace, trace_reverse,
)
from src.gauge import to_de_donder, to_synchronous, to_transverse_traceless, tt_obstruction
from src.greens import (
    Direction, GreensKind, GreensRequest, WaveOperator, greens_apply, greens_oracle,
    pauli_jordan, support_extent,
)
from src.linop import (
    de_donder_vector, dee_operator, euler_lagrange_residual, field_equation_residual,
    lichnerowicz, linearized_einstein, linearized_einstein_general, scalar_wave,
    truncation_floor, vector_wave,
)
from src.symplectic import (
    Observable, bianchi_test_tensor, constraint_pairing_identity, current_divergence,
    current_divergence_expected, field_generation_identity, make_observable, null_test_tensor,
    observable_eval, pauli_jordan_expansion, pauli_jordan_pairing, poisson_bracket,
    presymplectic, presymplectic_magnitude, separating_probe,
)
from src.utils.common import (
    Timer, format_time, interior_max, max_abs, observed_order, relative_gap,
)
from src.utils.config import SUITE_NAMES, Config, get_tolerances
from src.utils.errors import UsageError, WorkbenchError
from src.utils.logging_config import get_logger, log_performance

logger = get_logger(__name__)

TINY = 1e-300
ROUNDOFF_FLOOR = 1e-11
SEPARATION_PAIRS = 20
TIME_SLICE_SEEDS = 10
TIME_SLICE_WINDOWS = ((0.2, 0.4), (0.25, 0.45), (0.3, 0.5))
# first coordinate time of the fixed side grids used by the oracle and spacelike checks
SIDE_GRID_START = {"minkowski": 0.0, "desitter": -1.6}

Evaluator = Callable[[Background, int], float]


class CheckKind(Enum):
    """How a check's two norms turn into a verdict."""
    ORDER = "order"                # observed order >= min_order
    ORDER_NESTED = "order_nested"  # observed order >= min_order_nested
    EXACT = "exact"                # both norms <= threshold


@dataclass(frozen=True)
class CheckSpec:
    suite: str
    name: str
    invariant: str
    kind: CheckKind
    evaluate: Evaluator
    threshold: Optional[float] = ROUNDOFF_FLOOR  # None: configured null ratio
    charts: Tuple[str, ...] = ("minkowski", "desitter")


@dataclass
class CheckRecord:
    """Outcome of one check at two resolutions."""
    suite: str
    name: str
    invariant: str
    kind: str
    coarse: Optional[float]
    fine: Optional[float]
    order: Optional[float]
    threshold: float
    passed: bool
    runtime: float = 0.0
    error: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        """Deterministic record; the runtime lives in the report's timing block."""
        return {
            'suite': self.suite,
            'name': self.name,
            'invariant': self.invariant,
            'kind': self.kind,
            'coarse': self.coarse,
            'fine': self.fine,
            'order': self.order,
            'threshold': self.threshold,
            'status': 'pass' if self.passed else 'fail',
            'error': self.error,
        }


@dataclass
class SuiteReport:
    """All check records of a run plus the timing block."""
    config: Dict[str, Any]
    records: List[CheckRecord] = field(default_factory=list)
    generated_at: str = ""
    total_runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    @property
    def failures(self) -> List[CheckRecord]:
        return [record for record in self.records if not record.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'config': self.config,
            'status': 'pass' if self.passed else 'fail',
            'summary': {'checks': len(self.records), 'failed': len(self.failures)},
            'checks': [record.to_dict() for record in self.records],
            'timing': {
                'generated_at': self.generated_at,
                'total_runtime': self.total_runtime,
                'runtimes': {f"{r.suite}.{r.name}": r.runtime for r in self.records},
            },
        }


# ============================================================================
# Checks
# ============================================================================

def _ratio(value: float, scale: float) -> float:
    return float(value) / max(float(scale), TINY)


def _side_background(bg: Background, nt: int, nx: int, span: float) -> Background:
    """Fixed small grid of the same chart, independent of the suite resolution."""
    t0 = SIDE_GRID_START[bg.spec.kind.value]
    return build_background(bg.spec, Grid(nt=nt, nx=nx, t0=t0, t1=t0 + span, L=bg.grid.L))


def _raised(bg: Background, s: SymField2) -> np.ndarray:
    return raise_index(bg, raise_index(bg, s.as_tensor(), 0), 1).data


# ============================================================================
# identities
# ============================================================================

def _background_exactness(bg: Background, seed: int) -> float:
    lam = bg.cosmological_constant
    ricci_gap = float(np.max(np.abs(bg.ricci - lam * bg.g)))
    scalar_gap = float(np.max(np.abs(bg.ricci_scalar - 4.0 * lam)))
    return max(einstein_residual(bg), ricci_gap, scalar_gap)


def _euler_lagrange(bg: Background, seed: int) -> float:
    gamma = random_tensor(bg, seed)
    return _ratio(interior_max(euler_lagrange_residual(bg, gamma).data),
                  interior_max(gamma.components))


def _bianchi_identity(bg: Background, seed: int) -> float:
    gamma = random_tensor(bg, seed)
    einstein = linearized_einstein(bg, gamma)
    return _ratio(interior_max(divergence(bg, einstein).data, margin=3),
                  interior_max(einstein.components))


def _antisymmetric_input(bg: Background, seed: int) -> float:
    return linearized_einstein_general(bg, antisymmetric_bump(bg, seed)).norm()


def _plane_wave_truncation(bg: Background, seed: int) -> float:
    return truncation_floor(bg)


def _trace_reversal_commutes(bg: Background, seed: int) -> float:
    gamma = random_tensor(bg, seed)
    left, _ = trace_reverse(bg, lichnerowicz(bg, gamma))
    right = lichnerowicz(bg, trace_reverse(bg, gamma)[0])
    return _ratio(interior_max((left - right).components), interior_max(gamma.components))


def _de_donder_decomposition(bg: Background, seed: int) -> float:
    gamma = random_tensor(bg, seed)
    gamma_bar, _ = trace_reverse(bg, gamma)
    gauge, _ = trace_reverse(bg, lie_derivative_metric(bg, de_donder_vector(bg, gamma)))
    residual = 2.0 * linearized_einstein(bg, gamma) + lichnerowicz(bg, gamma_bar) - gauge
    return _ratio(interior_max(residual.components), interior_max(gamma.components))


def _lichnerowicz_divergence(bg: Background, seed: int) -> float:
    gamma = random_tensor(bg, seed)
    residual = divergence(bg, lichnerowicz(bg, gamma)).data - vector_wave(bg, divergence(bg, gamma)).data
    return _ratio(interior_max(residual), interior_max(gamma.components))


def _lichnerowicz_trace(bg: Background, seed: int) -> float:
    gamma = random_tensor(bg, seed)
    residual = trace(bg, lichnerowicz(bg, gamma)).data - scalar_wave(bg, trace(bg, gamma)).data
    return _ratio(interior_max(residual), interior_max(gamma.components))


def _pure_gauge_intertwining(bg: Background, seed: int) -> float:
    w = random_vector(bg, seed)
    residual = lichnerowicz(bg, lie_derivative_metric(bg, w)) - lie_derivative_metric(bg, vector_wave(bg, w))
    return _ratio(interior_max(residual.components), interior_max(w.data))


def _dee_divergence(bg: Background, seed: int) -> float:
    gamma = random_tensor(bg, seed)
    left = divergence(bg, dee_operator(bg, gamma)).data
    div = VecField(bg.grid, divergence(bg, gamma).data, "d")
    right = (0.5 * _raised(bg, lichnerowicz(bg, gamma))
             - bg.cosmological_constant * _raised(bg, gamma)
             - _raised(bg, 0.5 * lie_derivative_metric(bg, div)))
    return _ratio(interior_max(left - right), interior_max(gamma.components))


# ============================================================================
# gauges
# ============================================================================

def _de_donder_gauge(bg: Background, seed: int) -> float:
    report = to_de_donder(bg, random_tensor(bg, seed)).residual_report
    return _ratio(report['de_donder_after'], report['de_donder_before'])


def _synchronous_gauge(bg: Background, seed: int) -> float:
    report = to_synchronous(bg, random_tensor(bg, seed)).residual_report
    return _ratio(report['synchronous_after'], report['synchronous_before'])


def _tt_report(bg: Background, seed: int) -> Dict[str, float]:
    gamma = lie_derivative_metric(bg, wave_vector(bg, seed))
    return to_transverse_traceless(bg, gamma, check_preconditions=False).residual_report


def _tt_gauge(bg: Background, seed: int) -> float:
    report = _tt_report(bg, seed)
    return _ratio(max(report['trace_after'], report['de_donder_after']), report['trace_before'])


def _tt_slice_constraints(bg: Background, seed: int) -> float:
    report = _tt_report(bg, seed)
    return _ratio(max(report['tt_gauge_condition'], report['tt_normal_condition']),
                  report['trace_before'])


def _tt_obstruction_drift(bg: Background, seed: int) -> float:
    wave, _ = plane_wave_pair(bg, seed)
    growth = metric_field(bg, np.broadcast_to(bg.grid.t[:, None], bg.grid.shape))
    gamma = wave + growth + lie_derivative_metric(bg, wave_vector(bg, seed))
    early = tt_obstruction(bg, gamma, slice_index(bg, 0.25))
    late = tt_obstruction(bg, gamma, slice_index(bg, 0.75))
    return _ratio(abs(early - late), abs(early))


def _projected_data(bg: Background, seed: int) -> CauchyData:
    return project_constraints(bg, extract_data(bg, random_tensor(bg, seed), slice_index(bg)))


def _existence_data(bg: Background, seed: int) -> float:
    data = _projected_data(bg, seed)
    again = extract_data(bg, solve_linearized(bg, data), data.sigma)
    return _ratio((again - data).norm(), data.norm())


def _existence_field_equation(bg: Background, seed: int) -> float:
    data = _projected_data(bg, seed)
    return _ratio(field_equation_residual(bg, solve_linearized(bg, data)), data.norm())


def _de_donder_propagation(bg: Background, seed: int) -> float:
    sigma = slice_index(bg)
    data = extract_data(bg, random_tensor(bg, seed), sigma)
    result = solve_linearized_detailed(bg, data, check_constraints=False)
    return _ratio(de_donder_propagation(bg, result.de_donder_solution, sigma), data.norm())


def _uniqueness(bg: Background, seed: int) -> float:
    data = _projected_data(bg, seed)
    first = solve_linearized_detailed(bg, data).de_donder_solution
    second = evolve(bg, extract_data(bg, first, data.sigma), direction=Direction.BOTH)
    return _ratio(uniqueness_gap(bg, first, second), max(1.0, first.norm()))


def _deterministic_solve(bg: Background, seed: int) -> float:
    data = _projected_data(bg, seed)
    first, second = solve_linearized(bg, data), solve_linearized(bg, data)
    return 0.0 if np.array_equal(first.components, second.components) else 1.0


# ============================================================================
# greens
# ============================================================================

def _retarded(bg: Background, seed: int) -> Tuple[SymField2, SymField2]:
    source = bump_tensor(bg, seed)
    return source, greens_apply(bg, GreensRequest(WaveOperator.TENSOR_P, GreensKind.RETARDED, source))


def _retarded_inverse(bg: Background, seed: int) -> float:
    source, solution = _retarded(bg, seed)
    residual = lichnerowicz(bg, solution).components - source.components
    return _ratio(interior_max(residual, margin=3), source.norm())


def _retarded_support(bg: Background, seed: int) -> float:
    source, solution = _retarded(bg, seed)
    return support_extent(solution, bg=bg, source=source).leaks['below_source']


def _advanced_support(bg: Background, seed: int) -> float:
    source = bump_tensor(bg, seed)
    solution = greens_apply(bg, GreensRequest(WaveOperator.TENSOR_P, GreensKind.ADVANCED, source))
    return support_extent(solution, bg=bg, source=source).leaks['above_source']


def _oracle_agreement(bg: Background, seed: int) -> float:
    small = _side_background(bg, nt=8, nx=16, span=1.2)
    tensor = bump_tensor(small, seed, radii=(0.2, 1.0))
    requests = [GreensRequest(WaveOperator.TENSOR_P, kind, tensor) for kind in GreensKind]
    requests += [GreensRequest(operator, GreensKind.RETARDED, greens_source(small, operator, seed))
                 for operator in (WaveOperator.VECTOR_BOX_LAMBDA, WaveOperator.SCALAR_BOX_2LAMBDA)]
    worst = 0.0
    for request in requests:
        swept = as_tensor(greens_apply(small, request)).data
        dense = as_tensor(greens_oracle(small, request)).data
        worst = max(worst, _ratio(np.max(np.abs(swept - dense)), max(1.0, np.max(np.abs(swept)))))
    return worst


def _trace_reversal_intertwining(bg: Background, seed: int) -> float:
    f = bump_tensor(bg, seed)
    left, _ = trace_reverse(bg, pauli_jordan(bg, f))
    right = pauli_jordan(bg, trace_reverse(bg, f)[0])
    return _ratio(interior_max((left - right).components), f.norm())


def _divergence_intertwining(bg: Background, seed: int) -> float:
    f = bump_tensor(bg, seed)
    left = divergence(bg, greens_apply(bg, GreensRequest(WaveOperator.TENSOR_P, GreensKind.RETARDED, f))).data
    div_f = VecField(bg.grid, divergence(bg, f).data, "d")
    right = greens_apply(bg, GreensRequest(WaveOperator.VECTOR_BOX_LAMBDA, GreensKind.RETARDED, div_f)).data
    return _ratio(interior_max(left - right), f.norm())


def _lie_derivative_intertwining(bg: Background, seed: int) -> float:
    v = greens_source(bg, WaveOperator.VECTOR_BOX_LAMBDA, seed)
    left = lie_derivative_metric(bg, pauli_jordan(bg, v))
    right = pauli_jordan(bg, lie_derivative_metric(bg, v))
    return _ratio(interior_max((left - right).components), interior_max(v.data))


def _de_donder_criterion(bg: Background, seed: int) -> float:
    f, _ = trace_reverse(bg, 2.0 * linearized_einstein(bg, bump_tensor(bg, seed)))
    solution, _ = trace_reverse(bg, pauli_jordan(bg, f))
    return _ratio(interior_max(divergence(bg, solution).data), f.norm())


# ============================================================================
# symplectic
# ============================================================================

def _antisymmetry(bg: Background, seed: int) -> float:
    gamma1, gamma2 = random_tensor(bg, seed), random_tensor(bg, seed + 1)
    sigma = slice_index(bg)
    total = presymplectic(bg, gamma1, gamma2, sigma) + presymplectic(bg, gamma2, gamma1, sigma)
    return _ratio(abs(total), presymplectic_magnitude(bg, gamma1, gamma2, sigma))


def _current_identity(bg: Background, seed: int) -> float:
    gamma1, gamma2 = random_tensor(bg, seed), random_tensor(bg, seed + 1)
    expected = current_divergence_expected(bg, gamma1, gamma2).data
    residual = current_divergence(bg, gamma1, gamma2).data - expected
    return _ratio(interior_max(residual, margin=3), interior_max(expected, margin=3))


def _slice_independence(bg: Background, seed: int) -> float:
    gamma1, gamma2 = plane_wave_pair(bg, seed)
    early, late = slice_index(bg, 0.25), slice_index(bg, 0.75)
    gap = abs(presymplectic(bg, gamma1, gamma2, early) - presymplectic(bg, gamma1, gamma2, late))
    return _ratio(gap, presymplectic_magnitude(bg, gamma1, gamma2, early))


def _constraint_pairing(bg: Background, seed: int) -> float:
    gamma, w = random_tensor(bg, seed), random_vector(bg, seed + 1)
    sigma = slice_index(bg)
    lhs, rhs = constraint_pairing_identity(bg, gamma, w, sigma)
    scale = presymplectic_magnitude(bg, gamma, lie_derivative_metric(bg, w), sigma)
    return _ratio(abs(lhs - rhs), scale)


def _gauge_invariance(bg: Background, seed: int) -> float:
    wave, _ = plane_wave_pair(bg, seed)
    f = bianchi_test_tensor(bg, wave, window(bg, 0.35, 0.65))
    observable = make_observable(bg, f, label="bianchi")
    pure_gauge = lie_derivative_metric(bg, random_vector(bg, seed + 1))
    value = observable_eval(bg, observable, pure_gauge)
    # raising both indices of f cancels sqrt(-g) on conformally flat charts
    scale = (np.sum(np.max(np.abs(f.components), axis=0) * np.max(np.abs(pure_gauge.components), axis=0))
             * bg.grid.dt * bg.grid.dx)
    return _ratio(abs(value), scale)


def _pauli_jordan_expansion(bg: Background, seed: int) -> float:
    terms = pauli_jordan_expansion(bg, bump_tensor(bg, seed), bump_tensor(bg, seed + 1))
    return _ratio(abs(terms['lhs'] - terms['rhs']), abs(terms['tensor_term']) + abs(terms['scalar_term']))


def _radical_containment(bg: Background, seed: int) -> float:
    wave, _ = plane_wave_pair(bg, seed)
    gauge = lie_derivative_metric(bg, random_vector(bg, seed + 1))
    sigma = slice_index(bg)
    return _ratio(abs(presymplectic(bg, wave, gauge, sigma)),
                  presymplectic_magnitude(bg, wave, gauge, sigma))


def _bracket_observables(bg: Background, seed: int) -> Tuple[Observable, Observable]:
    f1, f2 = bianchi_pair(bg, seed)
    return make_observable(bg, f1, "f1"), make_observable(bg, f2, "f2")


def _bracket_cross_path(bg: Background, seed: int) -> float:
    result = poisson_bracket(bg, *_bracket_observables(bg, seed))
    return _ratio(result.discrepancy, abs(result.value))


def _field_generation(bg: Background, seed: int) -> float:
    terms = field_generation_identity(bg, *_bracket_observables(bg, seed))
    return _ratio(terms['residual'], abs(terms['smeared']))


def _spacelike_pairing(bg: Background, seed: int) -> float:
    small = _side_background(bg, nt=17, nx=64, span=0.5)
    rng = np.random.default_rng(seed)
    t_mid = 0.5 * (small.grid.t0 + small.grid.t1)
    centre = 0.5 * small.grid.L

    def source(x_centre: float) -> SymField2:
        return synthesize_field(small, BumpRecipe((t_mid, x_centre), (0.07, 0.3),
                                                  symmetric_polarization(rng)))

    return abs(pauli_jordan_pairing(small, source(centre - 1.8), source(centre + 1.8)))


def _separation(bg: Background, seed: int) -> float:
    """Worst floor-to-gap ratio over the seeded pairs; below one means separated."""
    observables = separation_observables(bg)
    worst = 0.0
    for k in range(SEPARATION_PAIRS):
        gamma1, gamma2 = plane_wave_pair(bg, seed + k)
        result = separating_probe(bg, gamma1, gamma2, observables)
        worst = max(worst, _ratio(result.floor, result.gap))
    return worst


# ============================================================================
# adm
# ============================================================================

def _background_constraints(bg: Background, seed: int) -> float:
    state = slice_background(bg, slice_index(bg))
    return _ratio(constraint_violation(state), 1.0 + abs(state.cosmological_constant))


def _symplectic_inner(bg: Background, seed: int) -> float:
    state = slice_background(bg, slice_index(bg))
    lhs, rhs = symplectic_inner_identity(state, slice_perturbation(bg, seed),
                                         slice_perturbation(bg, seed + 1))
    return relative_gap(lhs, rhs)


def _difference_quotient(bg: Background, seed: int) -> float:
    state = slice_background(bg, slice_index(bg))
    pert = slice_perturbation(bg, seed) * 1e-2
    exact = linearized_constraints(state, pert, ConstraintForm.GENERAL)
    quotient = constraint_difference_quotient(state, pert)
    gap = max_abs(*(e - q for e, q in zip(exact, quotient)))
    return _ratio(gap, max_abs(*exact))


def _adjointness(bg: Background, seed: int) -> float:
    state = slice_background(bg, slice_index(bg))
    x = slice_perturbation(bg, seed)
    rng = np.random.default_rng(seed + 1)
    profiles = slice_profiles(bg.grid.nx, bg.grid.L, rng, 4)
    f, V = profiles[0], profiles[1:]
    lhs = codomain_inner(state, linearized_constraints(state, x), (f, V))
    rhs = domain_inner(state, x, adjoint_total(state, f, V))
    return relative_gap(lhs, rhs)


def _pure_gauge_kernel(bg: Background, seed: int) -> float:
    state = slice_background(bg, slice_index(bg))
    C, X = gauge_profiles(bg, seed)
    pert = pure_gauge_data(state, C, X)
    hamiltonian, momentum = linearized_constraints(state, pert)
    return _ratio(max_abs(hamiltonian, momentum), pert.norm())


def _spacetime_pure_gauge(bg: Background, seed: int) -> float:
    sigma = slice_index(bg)
    state = slice_background(bg, sigma)
    C, X = gauge_profiles(bg, seed)
    gamma = lie_derivative_metric(bg, spacetime_gauge_vector(bg, C, X, sigma))
    expected = pure_gauge_data(state, C, X)
    return _ratio((synchronous_slice_data(bg, gamma, sigma) - expected).norm(), expected.norm())


def _kernel_orthogonality(bg: Background, seed: int) -> float:
    state = slice_background(bg, slice_index(bg))
    C, X = gauge_profiles(bg, seed)
    gauge = pure_gauge_data(state, C, X)
    worst = 0.0
    for k in range(1, 4):
        kernel = project_kernel(state, slice_perturbation(bg, seed + k))
        worst = max(worst, _ratio(abs(adm_symplectic(state, gauge, kernel)), gauge.norm() * kernel.norm()))
    return worst


# ============================================================================
# algebra
# ============================================================================

def _commutator_coefficient(bg: Background, seed: int) -> float:
    f1, f2 = bianchi_pair(bg, seed)
    algebra = CCRAlgebra(bg)
    bracket = commutator(generator(algebra, f1), generator(algebra, f2))
    expected = -2j * pauli_jordan_pairing(bg, f1, f2)
    return relative_gap(bracket.coefficient(), expected, max(abs(expected), TINY))


def _antisymmetric_generator(bg: Background, seed: int) -> float:
    element = generator(CCRAlgebra(bg), antisymmetric_bump(bg, seed))
    return 0.0 if element.is_zero() else 1.0


def _field_equation_null(bg: Background, seed: int) -> float:
    potential = bump_tensor(bg, seed, radii=(0.4, 1.5))
    algebra = CCRAlgebra(bg)
    element = generator(algebra, null_test_tensor(bg, potential))
    probes = [bump_tensor(bg, seed + k) for k in range(1, 3)]
    return is_null(element, probes).linear_ratio


def _hermiticity(bg: Background, seed: int) -> float:
    f, _ = bianchi_pair(bg, seed)
    element = generator(CCRAlgebra(bg), f)
    return max((abs(coeff) for coeff in (adjoint(element) - element).terms.values()), default=0.0)


def _generator_linearity(bg: Background, seed: int) -> float:
    f1, f2 = bianchi_pair(bg, seed)
    algebra = CCRAlgebra(bg)
    combined = generator(algebra, 2.0 * f1 + 0.5j * f2)
    difference = combined - 2.0 * generator(algebra, f1) - 0.5j * generator(algebra, f2)
    test_tensors = [bump_tensor(bg, seed + k) for k in range(1, 3)]
    return is_null(difference, test_tensors).linear_ratio


def _commutator_symplectic(bg: Background, seed: int) -> float:
    f1, f2 = bianchi_pair(bg, seed)
    algebra = CCRAlgebra(bg)
    bracket = commutator(generator(algebra, f1), generator(algebra, f2))
    result = poisson_bracket(bg, make_observable(bg, f1), make_observable(bg, f2))
    expected = 1j * result.symplectic_value
    return relative_gap(bracket.coefficient(), expected, max(abs(expected), TINY))


def _time_slice_null(bg: Background, seed: int) -> float:
    """Worst null ratio over seeded test tensors and slabs; a slab leak scores 1."""
    algebra = CCRAlgebra(bg)
    support_threshold = get_tolerances().support_threshold
    worst = 0.0
    for k in range(TIME_SLICE_SEEDS):
        wave, _ = plane_wave_pair(bg, seed + k)
        f = bianchi_test_tensor(bg, wave, window(bg, 0.6, 0.8))
        test_tensors = [bump_tensor(bg, seed + k + j) for j in range(1, 3)]
        for bounds in TIME_SLICE_WINDOWS:
            slab = window(bg, *bounds)
            reduced = time_slice_reduce(bg, f, slab)
            extent = support_of(reduced, support_threshold)
            if extent.t_lo < slab[0] or extent.t_hi > slab[1]:
                worst = max(worst, 1.0)
            difference = generator(algebra, f) - generator(algebra, reduced)
            worst = max(worst, is_null(difference, test_tensors).linear_ratio)
    return worst


# ============================================================================
# Registry
# ============================================================================

SUITES: Dict[str, List[CheckSpec]] = {
    "identities": [
        CheckSpec("identities", "background_exactness", "R_ab = Lambda g_ab, R = 4 Lambda, G + Lambda g = 0",
                  CheckKind.EXACT, _background_exactness, threshold=1e-12),
        CheckSpec("identities", "euler_lagrange", "div Pi - 2 S gamma - L(gamma) = 0 off-shell",
                  CheckKind.ORDER_NESTED, _euler_lagrange),
        CheckSpec("identities", "linearized_bianchi", "div L(gamma) = 0 off-shell",
                  CheckKind.ORDER_NESTED, _bianchi_identity),
        CheckSpec("identities", "antisymmetric_input", "general L vanishes on antisymmetric input",
                  CheckKind.EXACT, _antisymmetric_input, threshold=1e-12),
        CheckSpec("identities", "plane_wave_truncation", "P annihilates the exact plane wave",
                  CheckKind.ORDER_NESTED, _plane_wave_truncation),
        CheckSpec("identities", "trace_reversal_commutes", "P(gamma_bar) = (P gamma)_bar",
                  CheckKind.ORDER_NESTED, _trace_reversal_commutes),
        CheckSpec("identities", "de_donder_decomposition",
                  "2L(gamma) + P(gamma_bar) - (Lie_{div gamma_bar} g)_bar = 0",
                  CheckKind.ORDER_NESTED, _de_donder_decomposition),
        CheckSpec("identities", "lichnerowicz_divergence", "div P(gamma) = (box + Lambda) div gamma",
                  CheckKind.ORDER_NESTED, _lichnerowicz_divergence),
        CheckSpec("identities", "lichnerowicz_trace", "tr P(gamma) = (box + 2 Lambda) tr gamma",
                  CheckKind.ORDER_NESTED, _lichnerowicz_trace),
        CheckSpec("identities", "pure_gauge_intertwining", "P(Lie_w g) = Lie_{(box + Lambda) w} g",
                  CheckKind.ORDER_NESTED, _pure_gauge_intertwining),
        CheckSpec("identities", "dee_divergence",
                  "nabla_c D^cab = P(gamma)^ab / 2 - Lambda gamma^ab - nabla^(a div^b)",
                  CheckKind.ORDER_NESTED, _dee_divergence),
    ],
    "gauges": [
        CheckSpec("gauges", "de_donder", "div gamma_bar = 0 after to_de_donder",
                  CheckKind.ORDER_NESTED, _de_donder_gauge),
        CheckSpec("gauges", "synchronous", "n^a gamma_ab = 0 after to_synchronous",
                  CheckKind.ORDER, _synchronous_gauge),
        CheckSpec("gauges", "transverse_traceless", "tr gamma = 0 and div gamma = 0 after TT gauge",
                  CheckKind.ORDER_NESTED, _tt_gauge, charts=("desitter",)),
        CheckSpec("gauges", "tt_slice_constraints", "TT gauge vector satisfies the slice conditions",
                  CheckKind.ORDER_NESTED, _tt_slice_constraints, charts=("desitter",)),
        CheckSpec("gauges", "tt_obstruction_drift", "TT obstruction is independent of the slice",
                  CheckKind.ORDER_NESTED, _tt_obstruction_drift, charts=("minkowski",)),
        CheckSpec("gauges", "existence_data", "Data_sigma(solve_linearized(data)) = data",
                  CheckKind.EXACT, _existence_data, threshold=1e-8),
        CheckSpec("gauges", "existence_field_equation", "L(solve_linearized(data)) = 0",
                  CheckKind.ORDER_NESTED, _existence_field_equation),
        CheckSpec("gauges", "de_donder_propagation", "n . nabla (div gamma_bar) = 2 n^a L_ab on the slice",
                  CheckKind.ORDER_NESTED, _de_donder_propagation),
        CheckSpec("gauges", "uniqueness", "re-evolving the de Donder solution reproduces it",
                  CheckKind.EXACT, _uniqueness, threshold=1e-9),
        CheckSpec("gauges", "deterministic_solve", "repeated solves are bitwise identical",
                  CheckKind.EXACT, _deterministic_solve, threshold=0.0),
    ],
    "greens": [
        CheckSpec("greens", "retarded_inverse", "P(E+ f) = f",
                  CheckKind.ORDER_NESTED, _retarded_inverse),
        CheckSpec("greens", "retarded_support", "E+ f vanishes below supp f",
                  CheckKind.EXACT, _retarded_support, threshold=1e-12),
        CheckSpec("greens", "advanced_support", "E- f vanishes above supp f",
                  CheckKind.EXACT, _advanced_support, threshold=1e-12),
        CheckSpec("greens", "oracle_agreement", "sweep equals the dense solve on an 8x16 grid",
                  CheckKind.EXACT, _oracle_agreement, threshold=1e-8),
        CheckSpec("greens", "trace_reversal_intertwining", "E(f_bar) = (E f)_bar",
                  CheckKind.ORDER_NESTED, _trace_reversal_intertwining),
        CheckSpec("greens", "divergence_intertwining", "div E+ f = E+ div f",
                  CheckKind.ORDER_NESTED, _divergence_intertwining),
        CheckSpec("greens", "lie_derivative_intertwining", "Lie_{E v} g = E Lie_v g",
                  CheckKind.ORDER_NESTED, _lie_derivative_intertwining),
        CheckSpec("greens", "de_donder_criterion", "div (E f)_bar = 0 when div f_bar = 0",
                  CheckKind.ORDER_NESTED, _de_donder_criterion),
    ],
    "symplectic": [
        CheckSpec("symplectic", "antisymmetry", "omega(g1, g2) = -omega(g2, g1)",
                  CheckKind.EXACT, _antisymmetry, threshold=1e-12),
        CheckSpec("symplectic", "current_divergence", "div j = g2 L(g1) - g1 L(g2)",
                  CheckKind.ORDER_NESTED, _current_identity),
        CheckSpec("symplectic", "slice_independence", "omega_sigma independent of sigma on solutions",
                  CheckKind.ORDER_NESTED, _slice_independence),
        CheckSpec("symplectic", "constraint_pairing", "omega(gamma, Lie_w g) = 2 int w L(gamma) n",
                  CheckKind.ORDER_NESTED, _constraint_pairing),
        CheckSpec("symplectic", "gauge_invariance", "F_f(Lie_w g) = 0 for divergence-free f",
                  CheckKind.ORDER_NESTED, _gauge_invariance),
        CheckSpec("symplectic", "pauli_jordan_expansion", "-2E(f, g_bar) = -2E(f, g) + E_scalar(tr f, tr g)",
                  CheckKind.ORDER_NESTED, _pauli_jordan_expansion),
        CheckSpec("symplectic", "radical_containment", "omega(gamma, Lie_w g) = 0 on solutions",
                  CheckKind.ORDER_NESTED, _radical_containment),
        CheckSpec("symplectic", "bracket_cross_path", "-2E(f1, f2_bar) = 4 omega(E f1_bar, E f2_bar)",
                  CheckKind.ORDER_NESTED, _bracket_cross_path),
        CheckSpec("symplectic", "field_generation", "F_f(E g_bar) + 2 omega(E f_bar, E g_bar) = 0",
                  CheckKind.ORDER_NESTED, _field_generation),
        CheckSpec("symplectic", "spacelike_pairing", "E(f1, f2) = 0 for spacelike separated supports",
                  CheckKind.EXACT, _spacelike_pairing, threshold=1e-10),
        CheckSpec("symplectic", "separation",
                  "seeded distinct solutions differ on an observable above the floor",
                  CheckKind.EXACT, _separation, threshold=1.0),
    ],
    "adm": [
        CheckSpec("adm", "background_constraints", "Phi(h, varpi) = 0 on the background slice",
                  CheckKind.EXACT, _background_constraints, threshold=1e-10),
        CheckSpec("adm", "symplectic_inner", "omega_ADM(x; y) = <x; U^-1 y>",
                  CheckKind.EXACT, _symplectic_inner, threshold=1e-12),
        CheckSpec("adm", "difference_quotient", "DPhi matches the central difference of Phi",
                  CheckKind.EXACT, _difference_quotient, threshold=1e-6),
        CheckSpec("adm", "adjointness", "<<DPhi x; y>> = <x; DPhi* y>",
                  CheckKind.ORDER_NESTED, _adjointness),
        CheckSpec("adm", "pure_gauge_kernel", "U DPhi*(C, X) lies in ker DPhi",
                  CheckKind.ORDER_NESTED, _pure_gauge_kernel),
        CheckSpec("adm", "spacetime_pure_gauge", "slice data of Lie_w g equal U DPhi*(C, X)",
                  CheckKind.ORDER_NESTED, _spacetime_pure_gauge, charts=("minkowski",)),
        CheckSpec("adm", "kernel_orthogonality", "omega_ADM(U DPhi*(C, X), ker DPhi) = 0",
                  CheckKind.ORDER_NESTED, _kernel_orthogonality),
    ],
    "algebra": [
        CheckSpec("algebra", "commutator_coefficient", "[A, B] = -2i E(f1, f2_bar) 1",
                  CheckKind.EXACT, _commutator_coefficient, threshold=1e-13),
        CheckSpec("algebra", "antisymmetric_generator", "antisymmetric f smears to zero",
                  CheckKind.EXACT, _antisymmetric_generator, threshold=0.0),
        CheckSpec("algebra", "hermiticity", "Phi(f)* = Phi(f) for real f",
                  CheckKind.EXACT, _hermiticity, threshold=0.0),
        CheckSpec("algebra", "generator_linearity", "Phi(a f1 + b f2) - a Phi(f1) - b Phi(f2) is null",
                  CheckKind.EXACT, _generator_linearity, threshold=None),
        CheckSpec("algebra", "commutator_symplectic", "[A, B] = 4i omega(E f1_bar, E f2_bar) 1",
                  CheckKind.ORDER_NESTED, _commutator_symplectic),
        CheckSpec("algebra", "field_equation_null", "Phi(2L(k)) is null",
                  CheckKind.EXACT, _field_equation_null, threshold=None),
        CheckSpec("algebra", "time_slice_null", "Phi(f) - Phi(f_reduced) is null",
                  CheckKind.EXACT, _time_slice_null, threshold=None),
    ],
}


# ============================================================================
# Runner
# ============================================================================

def _threshold(spec: CheckSpec) -> float:
    return get_tolerances().null_ratio if spec.threshold is None else spec.threshold


def _verdict(spec: CheckSpec, coarse: float, fine: float) -> Tuple[Optional[float], bool]:
    tolerances = get_tolerances()
    threshold = _threshold(spec)
    if spec.kind is CheckKind.EXACT:
        return None, max(coarse, fine) <= threshold
    order = observed_order(coarse, fine)
    minimum = tolerances.min_order if spec.kind is CheckKind.ORDER else tolerances.min_order_nested
    return order, fine <= threshold or order >= minimum


def _finite(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


@log_performance
def run_check(spec: CheckSpec, bg: Background, refined: Background, seed: int) -> CheckRecord:
    """Evaluate one check on the grid and on its refinement."""
    timer = Timer()
    try:
        coarse = float(spec.evaluate(bg, seed))
        fine = float(spec.evaluate(refined, seed))
        order, passed = _verdict(spec, coarse, fine)
        error = None
    except WorkbenchError as exc:
        coarse = fine = order = None
        passed = False
        error = {key: value for key, value in exc.to_dict().items() if key != 'timestamp'}
    except (ValueError, ArithmeticError, IndexError) as exc:
        coarse = fine = order = None
        passed = False
        error = {'error_code': type(exc).__name__, 'message': str(exc), 'context': {}}
    runtime = timer.elapsed()
    record = CheckRecord(spec.suite, spec.name, spec.invariant, spec.kind.value,
                         _finite(coarse), _finite(fine), _finite(order), _threshold(spec),
                         passed, runtime, error)
    mark = "✅" if passed else "❌"
    detail = error['message'] if error else f"{coarse:.3e} -> {fine:.3e}"
    logger.info(f"{mark} {spec.suite}.{spec.name}: {detail}")
    return record


def selected_checks(suites: List[str], kind: str) -> List[CheckSpec]:
    if not suites:
        raise UsageError("no suites selected", known=list(SUITE_NAMES))
    unknown = [name for name in suites if name not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}", known=list(SUITE_NAMES))
    return [spec for name in suites for spec in SUITES[name] if kind in spec.charts]


def suite_background(config: Config) -> Background:
    """Background of the configured chart and grid."""
    t0, t1 = config.background.time_range()
    grid = Grid(nt=config.grid.nt, nx=config.grid.nx, t0=t0, t1=t1, L=config.grid.L)
    spec = BackgroundSpec(BackgroundKind(config.background.kind), H=config.background.H)
    return build_background(spec, grid)


def run_suite(config: Config) -> SuiteReport:
    """
    Run the configured suites at (nx, nt) and at the refined grid.

    Checks run on up to ``threads`` workers; records are assembled in
    registry order.
    """
    checks = selected_checks(list(config.suite.suites), config.background.kind)
    bg = suite_background(config)
    refined = bg.refined()
    seed = config.suite.seed
    try:
        threads = config.suite.effective_threads()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    logger.info(f"🚀 Running {len(checks)} checks on {config.background.kind} "
                f"({bg.grid.nt}x{bg.grid.nx} and {refined.grid.nt}x{refined.grid.nx}), "
                f"{threads} thread(s)")

    report = SuiteReport(config={
        'background': bg.to_dict(),
        'seed': seed,
        'suites': list(config.suite.suites),
        'tolerances': dict(config.tolerances.__dict__),
    })
    lock = threading.Lock()
    timer = Timer()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(run_check, spec, bg, refined, seed) for spec in checks]
        for future in futures:
            record = future.result()
            with lock:
                report.records.append(record)
    report.total_runtime = timer.elapsed()
    report.generated_at = datetime.now().isoformat()
    status = "passed" if report.passed else f"failed ({len(report.failures)} checks)"
    logger.info(f"🏁 Suite run {status} in {format_time(report.total_runtime)}")
    return report
