"""
Gauge-invariant linear observables, the Pauli-Jordan pairing and the Poisson
bracket.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.background.spacetime import Background
from src.fields.calculus import (
    covariant_derivative, divergence, spacetime_pairing, trace, trace_reverse,
)
from src.fields.tensors import (
    RankTwo, ScalarField, SymField2, as_tensor, require_interior_support,
    symmetric_part,
)
from src.greens.operators import pauli_jordan
from src.linop.residuals import truncation_floor
from src.symplectic.structure import presymplectic
from src.utils.common import interior_max
from src.utils.config import get_tolerances
from src.utils.errors import ContractError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


class DivergenceClass(Enum):
    """How much of a test tensor is divergence-free."""
    DIVERGENCE_FREE = "divergence_free"
    DIVERGENCE_FREE_SYMMETRIC_PART = "divergence_free_symmetric_part"
    UNRESTRICTED = "unrestricted"

    @property
    def gauge_invariant(self) -> bool:
        return self is not DivergenceClass.UNRESTRICTED


@dataclass(frozen=True, eq=False)
class Observable:
    """Smeared field F_f(gamma) = int gamma_ab f^ab with divergence metadata."""
    f: RankTwo
    divergence_class: DivergenceClass
    divergence_norm: float
    gradient_norm: float
    label: str = ""

    @property
    def symmetric(self) -> SymField2:
        return symmetric_part(self.f)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'divergence_class': self.divergence_class.value,
            'divergence_norm': self.divergence_norm,
            'gradient_norm': self.gradient_norm,
        }


def _divergence_ratio(bg: Background, f: RankTwo) -> tuple:
    div = interior_max(divergence(bg, f).data)
    grad = interior_max(covariant_derivative(bg, f).data)
    ratio = div / grad if grad > 0.0 else 0.0
    return ratio, div, grad


def make_observable(bg: Background, f: RankTwo, label: str = "") -> Observable:
    """
    Classify a compactly supported test tensor by the size of its divergence
    relative to its gradient.
    """
    require_interior_support(f, layers=2, name="test tensor")
    limit = get_tolerances().divergence_ratio
    sym_ratio, sym_div, sym_grad = _divergence_ratio(bg, symmetric_part(f))
    tensor = as_tensor(f)
    antisymmetric = tensor.data - np.swapaxes(tensor.data, 0, 1)
    if isinstance(f, SymField2) or not np.any(antisymmetric):
        full_ratio = sym_ratio
    else:
        full_ratio, _, _ = _divergence_ratio(bg, tensor)

    if full_ratio <= limit and sym_ratio <= limit:
        divergence_class = DivergenceClass.DIVERGENCE_FREE
    elif sym_ratio <= limit:
        divergence_class = DivergenceClass.DIVERGENCE_FREE_SYMMETRIC_PART
    else:
        divergence_class = DivergenceClass.UNRESTRICTED
    logger.debug(f"🔎 Observable {label or '<unnamed>'}: {divergence_class.value} "
                 f"(divergence/gradient = {sym_ratio:.3e})")
    return Observable(f, divergence_class, sym_div, sym_grad, label)


def observable_eval(bg: Background, obs: Observable, gamma: SymField2,
                    require_gauge_invariance: bool = False) -> complex:
    """F_f(gamma); only the symmetric part of f contributes."""
    if require_gauge_invariance and not obs.divergence_class.gauge_invariant:
        raise ContractError(
            f"observable {obs.label or '<unnamed>'} is not gauge invariant",
            measured=obs.divergence_norm,
            tolerance=get_tolerances().divergence_ratio * obs.gradient_norm,
        )
    return spacetime_pairing(bg, gamma, obs.symmetric)


# ============================================================================
# Pauli-Jordan Pairing
# ============================================================================

def _oriented_pairing(bg: Background, f1: SymField2, f2: SymField2, reverse: bool) -> complex:
    """int f1^ab (E f2_bar)_ab, or without the trace reversal."""
    source = trace_reverse(bg, f2)[0] if reverse else f2
    return spacetime_pairing(bg, pauli_jordan(bg, source), f1)


def pauli_jordan_pairing(bg: Background, f1: RankTwo, f2: RankTwo) -> complex:
    """
    E(f1^s, f2_bar^s), antisymmetrized over the two orientations so that the
    pairing is exactly antisymmetric on the grid.
    """
    s1, s2 = symmetric_part(f1), symmetric_part(f2)
    return 0.5 * (_oriented_pairing(bg, s1, s2, True) - _oriented_pairing(bg, s2, s1, True))


def _scalar_pairing(bg: Background, f1: SymField2, f2: SymField2) -> complex:
    tr1 = trace(bg, f1)
    tr2 = trace(bg, f2)

    def oriented(a: ScalarField, b: ScalarField) -> complex:
        propagated = pauli_jordan(bg, b).data
        density = a.data * propagated * bg.sqrt_minus_g[:, None]
        return complex(np.sum(density) * bg.grid.dt * bg.grid.dx)

    return 0.5 * (oriented(tr1, tr2) - oriented(tr2, tr1))


def pauli_jordan_expansion(bg: Background, f1: RankTwo, f2: RankTwo) -> Dict[str, complex]:
    """
    Both sides of -2E(f^s, f'_bar^s) = -2E(f^s, f'^s) + E_scalar(tr f, tr f').
    """
    s1, s2 = symmetric_part(f1), symmetric_part(f2)
    lhs = -2.0 * pauli_jordan_pairing(bg, s1, s2)
    tensor_term = -2.0 * 0.5 * (_oriented_pairing(bg, s1, s2, False)
                                - _oriented_pairing(bg, s2, s1, False))
    scalar_term = _scalar_pairing(bg, s1, s2)
    return {
        'lhs': lhs,
        'tensor_term': tensor_term,
        'scalar_term': scalar_term,
        'rhs': tensor_term + scalar_term,
    }


# ============================================================================
# Poisson Bracket
# ============================================================================

@dataclass(frozen=True)
class BracketResult:
    """Bracket value with the symplectic cross-check on a slice."""
    value: complex
    symplectic_value: complex
    discrepancy: float
    sigma: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': [self.value.real, self.value.imag],
            'symplectic_value': [self.symplectic_value.real, self.symplectic_value.imag],
            'discrepancy': self.discrepancy,
            'sigma': self.sigma,
        }


def _require_bracket_class(obs: Observable) -> None:
    if not obs.divergence_class.gauge_invariant:
        raise ContractError(
            f"Poisson bracket needs divergence-free symmetric parts; "
            f"{obs.label or '<unnamed>'} is {obs.divergence_class.value}",
            measured=obs.divergence_norm,
            tolerance=get_tolerances().divergence_ratio * obs.gradient_norm,
        )


def propagated_solution(bg: Background, obs: Observable) -> SymField2:
    """E f_bar^s, the solution an observable generates."""
    f_bar, _ = trace_reverse(bg, obs.symmetric)
    return pauli_jordan(bg, f_bar)


def poisson_bracket(bg: Background, obs1: Observable, obs2: Observable,
                    sigma: Optional[int] = None) -> BracketResult:
    """
    {F_f1, F_f2} = -2 E(f1^s, f2_bar^s), cross-evaluated as
    4 omega(E f1_bar^s, E f2_bar^s) on slice sigma (central by default).
    """
    _require_bracket_class(obs1)
    _require_bracket_class(obs2)
    sigma = bg.grid.nt // 2 if sigma is None else sigma
    value = -2.0 * pauli_jordan_pairing(bg, obs1.f, obs2.f)
    symplectic_value = 4.0 * presymplectic(bg, propagated_solution(bg, obs1),
                                           propagated_solution(bg, obs2), sigma)
    discrepancy = abs(value - symplectic_value)
    logger.debug(f"🔗 Bracket {value:.6e} vs symplectic {symplectic_value:.6e}")
    return BracketResult(value, symplectic_value, discrepancy, sigma)


# ============================================================================
# Separation Probe
# ============================================================================

@dataclass
class ProbeResult:
    """Best separating probe among candidates."""
    index: int
    gap: float
    floor: float
    gaps: List[float] = field(default_factory=list)

    @property
    def separates(self) -> bool:
        return self.gap > self.floor


def separating_probe(bg: Background, gamma1: SymField2, gamma2: SymField2,
                     probes: Sequence[Observable]) -> ProbeResult:
    """
    The probe with the largest |F_f(gamma1) - F_f(gamma2)|, with the
    gauge-invariance floor floor_factor x truncation floor x observable scale.
    """
    if not probes:
        raise ValueError("separating_probe needs at least one probe")
    gaps, scale = [], 0.0
    for probe in probes:
        v1 = observable_eval(bg, probe, gamma1)
        v2 = observable_eval(bg, probe, gamma2)
        gaps.append(abs(v1 - v2))
        scale = max(scale, abs(v1), abs(v2))
    floor = get_tolerances().floor_factor * truncation_floor(bg) * scale
    best = int(np.argmax(gaps))
    return ProbeResult(best, float(gaps[best]), floor, [float(g) for g in gaps])


def field_generation_identity(bg: Background, obs_f: Observable, obs_g: Observable,
                              sigma: Optional[int] = None) -> Dict[str, complex]:
    """
    Both terms of F_f(E g_bar) + 2 omega(E f_bar, E g_bar) = 0 for
    divergence-free symmetric f.
    """
    _require_bracket_class(obs_f)
    sigma = bg.grid.nt // 2 if sigma is None else sigma
    generated = propagated_solution(bg, obs_g)
    smeared = observable_eval(bg, obs_f, generated)
    symplectic_term = 2.0 * presymplectic(bg, propagated_solution(bg, obs_f), generated, sigma)
    return {
        'smeared': smeared,
        'symplectic': symplectic_term,
        'residual': abs(smeared + symplectic_term),
    }
