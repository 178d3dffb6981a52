"""
Explicit leapfrog evolution of the normally hyperbolic operators.

Each operator Q (tensor P, vector box + Lambda, scalar box + 2 Lambda) is
split at a time level as

    Q(T) = g^00 d_t^2 T + F(T) + B(d_t T)

where F collects every term without time derivatives of T and B is the
pointwise linear map acting on d_t T (connection terms only). Centered
differencing in t makes the update for the next level the solution of a
small dense system K = g^00/dt^2 I +/- B/(2dt) on the component space,
probed once per level and factorized with scipy.
"""

from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import linalg

from src.background.grid import CFL_LIMIT
from src.background.spacetime import Background
from src.fields.calculus import connection_action, d_x, d_xx
from src.fields.tensors import DIM
from src.utils.errors import EvolutionError
from src.utils.logging_config import get_logger, log_performance

logger = get_logger(__name__)


class WaveOperator(Enum):
    """Normally hyperbolic operators with Green's operators on the grid."""
    TENSOR_P = "tensor_p"
    VECTOR_BOX_LAMBDA = "vector_box_lambda"
    SCALAR_BOX_2LAMBDA = "scalar_box_2lambda"


class Direction(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    BOTH = "both"


_DEFAULT_VARIANCE = {
    WaveOperator.TENSOR_P: "dd",
    WaveOperator.VECTOR_BOX_LAMBDA: "u",
    WaveOperator.SCALAR_BOX_2LAMBDA: "",
}


class LevelOperator:
    """
    Discrete operator of one wave equation on a background.

    Level arrays carry the tensor indices followed by (t, x); a single level
    is passed with a t axis of length one.
    """

    def __init__(self, bg: Background, operator: WaveOperator, variance: Optional[str] = None):
        grid = bg.grid
        if grid.courant > CFL_LIMIT * (1.0 + 1e-12):
            raise EvolutionError(
                f"CFL violated: dt/dx = {grid.courant:.4f} exceeds {CFL_LIMIT}",
                courant=grid.courant,
            )
        self.bg = bg
        self.operator = operator
        self.variance = _DEFAULT_VARIANCE[operator] if variance is None else variance
        if len(self.variance) != len(_DEFAULT_VARIANCE[operator]):
            raise ValueError(f"variance {self.variance!r} does not fit operator {operator.value}")
        self.component_shape: Tuple[int, ...] = (DIM,) * len(self.variance)
        self.size = DIM ** len(self.variance)
        self.dt = grid.dt
        self.dx = grid.dx

        self._g00 = bg.g_inv[0, 0]
        self._g_diag = np.einsum('aat->at', bg.g_inv)
        self._contracted = np.einsum('abt,eabt->et', bg.g_inv, bg.christoffel)
        self._factors: Dict[Tuple[int, int], tuple] = {}

    # ------------------------------------------------------------------
    # Operator pieces
    # ------------------------------------------------------------------

    def _conn(self, christoffel: np.ndarray, data: np.ndarray) -> np.ndarray:
        return connection_action(christoffel, data, self.variance)

    @staticmethod
    def _along_t(coefficient: np.ndarray) -> np.ndarray:
        return coefficient[:, None]

    def static_terms(self, levels: slice, values: np.ndarray) -> np.ndarray:
        """F(T): every term of Q without a time derivative of T."""
        bg = self.bg
        gam = bg.christoffel[..., levels]
        dgam = bg.christoffel_dt[..., levels]
        g_diag = self._g_diag[:, levels]
        contracted = self._contracted[:, levels]

        first_x = d_x(values, self.dx)
        conn_values = self._conn(gam, values)

        out = self._along_t(g_diag[1]) * d_xx(values, self.dx)
        out = out + 2.0 * self._along_t(g_diag[1]) * self._conn(gam, first_x)[1]
        out = out + self._along_t(g_diag[0]) * self._conn(dgam, values)[0]
        for a in range(DIM):
            out = out + self._along_t(g_diag[a]) * self._conn(gam, conn_values[a])[a]
        # the d_t T part of the e = 0 term sits in B
        partials = (0.0, first_x, 0.0, 0.0)
        for e in range(DIM):
            out = out - self._along_t(contracted[e]) * (conn_values[e] + partials[e])
        return out + self.mass_term(levels, values)

    def time_derivative_terms(self, levels: slice, rates: np.ndarray) -> np.ndarray:
        """B(d_t T) = 2 g^00 G_0(d_t T) - Gamma^0 d_t T."""
        gam = self.bg.christoffel[..., levels]
        return (2.0 * self._along_t(self._g00[levels]) * self._conn(gam, rates)[0]
                - self._along_t(self._contracted[0, levels]) * rates)

    def mass_term(self, levels: slice, values: np.ndarray) -> np.ndarray:
        bg = self.bg
        lam = bg.cosmological_constant
        if self.operator is WaveOperator.TENSOR_P:
            return -2.0 * np.einsum('cet,eabdt,cdtx->abtx',
                                    bg.g_inv[..., levels], bg.riemann[..., levels], values)
        if self.operator is WaveOperator.VECTOR_BOX_LAMBDA:
            return lam * values
        return 2.0 * lam * values

    def spatial_terms(self, levels: slice, values: np.ndarray, rates: np.ndarray) -> np.ndarray:
        """F(T) + B(d_t T)."""
        return self.static_terms(levels, values) + self.time_derivative_terms(levels, rates)

    def apply(self, data: np.ndarray) -> np.ndarray:
        """Q on the interior levels 1..nt-2 with centered time differences."""
        inner = slice(1, data.shape[-2] - 1)
        values = data[..., 1:-1, :]
        rates = (data[..., 2:, :] - data[..., :-2, :]) / (2.0 * self.dt)
        second = (data[..., 2:, :] - 2.0 * values + data[..., :-2, :]) / self.dt ** 2
        return (self._along_t(self._g00[inner]) * second
                + self.spatial_terms(inner, values, rates))

    # ------------------------------------------------------------------
    # Level systems
    # ------------------------------------------------------------------

    def rate_matrix(self, j: int) -> np.ndarray:
        """Matrix of B at level j, probed with unit component tensors."""
        probes = np.eye(self.size).reshape((self.size,) + self.component_shape + (1, 1))
        columns = [self.time_derivative_terms(slice(j, j + 1), probes[k]).reshape(self.size)
                   for k in range(self.size)]
        return np.stack(columns, axis=1)

    def _factor(self, j: int, sign: int):
        key = (j, sign)
        if key not in self._factors:
            system = (self._g00[j] / self.dt ** 2) * np.eye(self.size) \
                + sign * self.rate_matrix(j) / (2.0 * self.dt)
            try:
                self._factors[key] = linalg.lu_factor(system)
            except (linalg.LinAlgError, ValueError) as exc:
                raise EvolutionError(f"singular level system at j={j}", level=j) from exc
        return self._factors[key]

    def _solve(self, j: int, sign: int, rhs: np.ndarray) -> np.ndarray:
        flat = rhs.reshape(self.size, -1)
        solved = linalg.lu_solve(self._factor(j, sign), flat)
        return solved.reshape(rhs.shape)

    def _level(self, data: np.ndarray, j: int) -> np.ndarray:
        return data[..., j:j + 1, :]

    def step(self, data: np.ndarray, source: np.ndarray, j: int, direction: Direction) -> None:
        """Fill level j+1 (forward) or j-1 (backward) from the two neighbouring levels."""
        levels = slice(j, j + 1)
        current = self._level(data, j)
        g00 = self._g00[j]
        if direction is Direction.FORWARD:
            previous = self._level(data, j - 1)
            rhs = (self._level(source, j)
                   - g00 * (-2.0 * current + previous) / self.dt ** 2
                   - self.static_terms(levels, current)
                   + self.time_derivative_terms(levels, previous) / (2.0 * self.dt))
            data[..., j + 1:j + 2, :] = self._solve(j, +1, rhs)
        else:
            following = self._level(data, j + 1)
            rhs = (self._level(source, j)
                   - g00 * (following - 2.0 * current) / self.dt ** 2
                   - self.static_terms(levels, current)
                   - self.time_derivative_terms(levels, following) / (2.0 * self.dt))
            data[..., j - 1:j, :] = self._solve(j, -1, rhs)

    def taylor_start(self, value: np.ndarray, rate: np.ndarray, source_level: np.ndarray,
                     sigma: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Neighbour levels sigma -/+ 1 from value and d_t T on level sigma, with
        d_t^2 T taken from the equation itself.
        """
        levels = slice(sigma, sigma + 1)
        accel = (source_level - self.spatial_terms(levels, value, rate)) / self._g00[sigma]
        below = value - self.dt * rate + 0.5 * self.dt ** 2 * accel
        above = value + self.dt * rate + 0.5 * self.dt ** 2 * accel
        return below, above

    # ------------------------------------------------------------------
    # Sweeps
    # ------------------------------------------------------------------

    def zeros(self, dtype=float) -> np.ndarray:
        return np.zeros(self.component_shape + self.bg.grid.shape, dtype=dtype)

    @log_performance
    def sweep(self, data: np.ndarray, source: np.ndarray, start: int, direction: Direction) -> np.ndarray:
        """
        Fill the grid from two known levels.

        Forward: levels start-1 and start are known, levels start+1.. are filled.
        Backward: levels start and start+1 are known, levels ..start-1 are filled.
        """
        nt = self.bg.grid.nt
        if direction is Direction.FORWARD:
            for j in range(start, nt - 1):
                self.step(data, source, j, Direction.FORWARD)
        elif direction is Direction.BACKWARD:
            for j in range(start, 0, -1):
                self.step(data, source, j, Direction.BACKWARD)
        else:
            raise ValueError("sweep takes a single direction")
        return data

    def evolve_from(self, sigma: int, value: np.ndarray, rate: np.ndarray,
                    source: np.ndarray, direction: Direction = Direction.BOTH) -> np.ndarray:
        """
        Solve Q(T) = source from T and d_t T on level sigma.

        ``value`` and ``rate`` are single-level arrays (components..., nx).
        Levels on a side that is not evolved stay zero.
        """
        nt = self.bg.grid.nt
        if not 1 <= sigma <= nt - 2:
            raise EvolutionError(f"data slice {sigma} must have a neighbour on both sides", sigma=sigma)
        dtype = np.result_type(value, rate, source, float)
        data = self.zeros(dtype)
        value = np.asarray(value)[..., None, :]
        rate = np.asarray(rate)[..., None, :]
        below, above = self.taylor_start(value, rate, self._level(source, sigma), sigma)
        data[..., sigma:sigma + 1, :] = value
        if direction in (Direction.FORWARD, Direction.BOTH):
            data[..., sigma + 1:sigma + 2, :] = above
            self.sweep(data, source, sigma + 1, Direction.FORWARD)
        if direction in (Direction.BACKWARD, Direction.BOTH):
            data[..., sigma - 1:sigma, :] = below
            self.sweep(data, source, sigma - 1, Direction.BACKWARD)
        logger.debug(f"🌊 Evolved {self.operator.value} from slice {sigma} ({direction.value})")
        return data
