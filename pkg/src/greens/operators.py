"""
Retarded, advanced and Pauli-Jordan Green's operators, the dense-matrix
oracle and support diagnostics.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Union

import numpy as np
from scipy import linalg

from src.background.spacetime import Background
from src.fields.calculus import trace_reverse
from src.fields.tensors import (
    ScalarField, SupportWindow, SymField2, VecField, as_tensor,
    require_interior_support, support_of,
)
from src.greens.evolver import Direction, LevelOperator, WaveOperator
from src.utils.config import get_tolerances
from src.utils.errors import ResourceError
from src.utils.logging_config import get_logger, log_performance

logger = get_logger(__name__)

GreensField = Union[SymField2, VecField, ScalarField]


class GreensKind(Enum):
    RETARDED = "retarded"
    ADVANCED = "advanced"
    PAULI_JORDAN = "pauli_jordan"


@dataclass(frozen=True, eq=False)
class GreensRequest:
    """Operator, kind and a compactly supported source of matching rank."""
    operator: WaveOperator
    kind: GreensKind
    source: GreensField

    def __post_init__(self):
        expected = {
            WaveOperator.TENSOR_P: (SymField2,),
            WaveOperator.VECTOR_BOX_LAMBDA: (VecField,),
            WaveOperator.SCALAR_BOX_2LAMBDA: (ScalarField,),
        }[self.operator]
        if not isinstance(self.source, expected):
            raise ValueError(
                f"{self.operator.value} expects a {expected[0].__name__} source, "
                f"got {type(self.source).__name__}"
            )

    @property
    def variance(self) -> str:
        return as_tensor(self.source).variance

    def with_kind(self, kind: GreensKind) -> 'GreensRequest':
        return GreensRequest(self.operator, kind, self.source)


def _source_data(source: GreensField) -> np.ndarray:
    return as_tensor(source).data


def _wrap(bg: Background, request: GreensRequest, data: np.ndarray) -> GreensField:
    if request.operator is WaveOperator.TENSOR_P:
        return SymField2.from_full(bg.grid, data)
    if request.operator is WaveOperator.VECTOR_BOX_LAMBDA:
        return VecField(bg.grid, data, request.variance)
    return ScalarField(bg.grid, data)


def _sweep(bg: Background, request: GreensRequest, kind: GreensKind) -> np.ndarray:
    level_op = LevelOperator(bg, request.operator, request.variance)
    source = _source_data(request.source)
    data = level_op.zeros(np.result_type(source, float))
    if kind is GreensKind.RETARDED:
        return level_op.sweep(data, source, 1, Direction.FORWARD)
    return level_op.sweep(data, source, bg.grid.nt - 2, Direction.BACKWARD)


@log_performance
def greens_apply(bg: Background, request: GreensRequest) -> GreensField:
    """
    Apply E+ (retarded), E- (advanced) or E = E- - E+ to the request source.

    Retarded solutions vanish on the two lowest layers and are swept forward;
    advanced solutions are the mirror image. The Pauli-Jordan field comes from
    two independent sweeps.
    """
    require_interior_support(request.source, layers=2, name="Green's operator source")
    if request.kind is GreensKind.PAULI_JORDAN:
        data = _sweep(bg, request, GreensKind.ADVANCED) - _sweep(bg, request, GreensKind.RETARDED)
    else:
        data = _sweep(bg, request, request.kind)
    logger.debug(f"🧮 Applied {request.kind.value} Green's operator of {request.operator.value}")
    return _wrap(bg, request, data)


def _oracle_solve(bg: Background, request: GreensRequest, kind: GreensKind) -> np.ndarray:
    level_op = LevelOperator(bg, request.operator, request.variance)
    grid = bg.grid
    shape = level_op.component_shape + grid.shape
    known = np.zeros(shape, dtype=bool)
    if kind is GreensKind.RETARDED:
        known[..., :2, :] = True
    else:
        known[..., -2:, :] = True
    unknowns = np.flatnonzero(~known.ravel())

    columns = []
    probe = np.zeros(shape)
    flat_probe = probe.reshape(-1)
    for index in unknowns:
        flat_probe[index] = 1.0
        columns.append(level_op.apply(probe).ravel())
        flat_probe[index] = 0.0
    matrix = np.stack(columns, axis=1)

    source = _source_data(request.source)
    rhs = source[..., 1:-1, :].ravel()
    solution = linalg.solve(matrix, rhs)
    data = np.zeros(shape, dtype=np.result_type(solution, float))
    data.reshape(-1)[unknowns] = solution
    return data


@log_performance
def greens_oracle(bg: Background, request: GreensRequest) -> GreensField:
    """
    Same discrete problem as ``greens_apply`` solved as one dense linear system
    over the whole spacetime grid.
    """
    require_interior_support(request.source, layers=2, name="Green's operator source")
    grid = bg.grid
    components = 4 ** len(request.variance)
    unknowns = (grid.nt - 2) * grid.nx * components
    limit = get_tolerances().oracle_max_unknowns
    if unknowns > limit:
        raise ResourceError(
            f"dense oracle needs {unknowns} unknowns, limit is {limit}",
            unknowns=unknowns, limit=limit,
        )
    if request.kind is GreensKind.PAULI_JORDAN:
        data = (_oracle_solve(bg, request, GreensKind.ADVANCED)
                - _oracle_solve(bg, request, GreensKind.RETARDED))
    else:
        data = _oracle_solve(bg, request, request.kind)
    logger.debug(f"🧱 Dense oracle solved {unknowns} unknowns for {request.kind.value}")
    return _wrap(bg, request, data)


# ============================================================================
# Support Diagnostics
# ============================================================================

def _distance_to(row: np.ndarray) -> np.ndarray:
    """Circular cell distance from every x index to the nearest True entry of ``row``."""
    nx = row.size
    gaps = np.abs(np.arange(nx)[:, None] - np.flatnonzero(row)[None, :])
    return np.minimum(gaps, nx - gaps).min(axis=1)


def causal_cone(bg: Background, source_mask: np.ndarray, future: bool = True,
                speed_cells: Optional[float] = None) -> np.ndarray:
    """
    Discrete J+ (or J-) of a support mask with a one-cell dilation.

    ``speed_cells`` is the spread in x-cells per time level; by default it is
    the coordinate light speed dt/dx.
    """
    grid = bg.grid
    nt, nx = grid.nt, grid.nx
    speed = grid.dt / grid.dx if speed_cells is None else speed_cells
    levels = np.arange(nt)
    cone = np.zeros((nt, nx), dtype=bool)
    for j_src in np.flatnonzero(source_mask.any(axis=1)):
        distance = _distance_to(source_mask[j_src])
        elapsed = levels - j_src if future else j_src - levels
        radius = np.floor(speed * np.maximum(elapsed, 0) + 1e-9) + 1
        reach = (distance[None, :] <= radius[:, None]) & (elapsed >= -1)[:, None]
        cone |= reach
    return cone


@dataclass
class SupportExtent:
    """Threshold support window of a field together with the cones of a source."""
    window: Optional[SupportWindow]
    threshold: float
    future_cone: Optional[np.ndarray] = None
    past_cone: Optional[np.ndarray] = None
    stencil_future_cone: Optional[np.ndarray] = None
    stencil_past_cone: Optional[np.ndarray] = None
    leaks: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'window': self.window.to_dict() if self.window is not None else None,
            'threshold': self.threshold,
            'leaks': dict(self.leaks),
        }


def _magnitude(field_like) -> np.ndarray:
    tensor = as_tensor(field_like)
    values = np.abs(tensor.data)
    return values.reshape((-1,) + values.shape[-2:]).max(axis=0)


def support_extent(field_like, threshold: Optional[float] = None,
                   bg: Optional[Background] = None, source=None) -> SupportExtent:
    """
    Smallest (t, x) window holding entries above ``threshold``.

    With a background and a source, also reports the physical and stencil
    cones of the source support and the largest magnitude found outside each.
    """
    if threshold is None:
        threshold = get_tolerances().support_threshold
    extent = SupportExtent(window=support_of(field_like, threshold), threshold=threshold)
    if bg is None or source is None:
        return extent

    source_mask = _magnitude(source) > 0.0
    magnitude = _magnitude(field_like)
    extent.future_cone = causal_cone(bg, source_mask, future=True)
    extent.past_cone = causal_cone(bg, source_mask, future=False)
    extent.stencil_future_cone = causal_cone(bg, source_mask, future=True, speed_cells=1.0)
    extent.stencil_past_cone = causal_cone(bg, source_mask, future=False, speed_cells=1.0)
    union = extent.future_cone | extent.past_cone
    stencil_union = extent.stencil_future_cone | extent.stencil_past_cone
    rows = np.flatnonzero(source_mask.any(axis=1))
    below = np.zeros_like(source_mask)
    above = np.zeros_like(source_mask)
    below[:rows[0]] = True
    above[rows[-1] + 1:] = True
    for name, region in (('outside_future_cone', ~extent.future_cone),
                         ('outside_past_cone', ~extent.past_cone),
                         ('outside_causal_cones', ~union),
                         ('outside_stencil_cones', ~stencil_union),
                         ('below_source', below),
                         ('above_source', above)):
        extent.leaks[name] = float(magnitude[region].max()) if region.any() else 0.0
    return extent


# ============================================================================
# Sourced Solutions
# ============================================================================

def sourced_solution(bg: Background, f: SymField2) -> SymField2:
    """
    gamma = -2 E+ f_bar, which solves L(gamma) = f for divergence-free f and
    vanishes below the support of f.
    """
    f_bar, _ = trace_reverse(bg, f)
    retarded = greens_apply(bg, GreensRequest(WaveOperator.TENSOR_P, GreensKind.RETARDED, f_bar))
    return -2.0 * retarded


def pauli_jordan(bg: Background, source: GreensField) -> GreensField:
    """Shorthand for E = E- - E+ of the operator matching the source rank."""
    if isinstance(source, SymField2):
        operator = WaveOperator.TENSOR_P
    elif isinstance(source, VecField):
        operator = WaveOperator.VECTOR_BOX_LAMBDA
    elif isinstance(source, ScalarField):
        operator = WaveOperator.SCALAR_BOX_2LAMBDA
    else:
        raise TypeError(f"no Green's operator for {type(source).__name__}")
    return greens_apply(bg, GreensRequest(operator, GreensKind.PAULI_JORDAN, source))
