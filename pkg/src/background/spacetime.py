"""
Analytic cosmological vacuum backgrounds in conformally flat charts.

The metric is g = a(t)^2 diag(-1, 1, 1, 1). With A = a'/a the Christoffel
symbols are Gamma^a_bc = A K^a_bc where
K^a_bc = delta^a_b delta^0_c + delta^a_c delta^0_b + eta_bc delta^a_0,
and curvature follows from Gamma and dGamma/dt in closed form.

Riemann convention: R_abc^d w_d = (nabla_a nabla_b - nabla_b nabla_a) w_c,
Ricci R_ac = R_abc^b. Arrays store time-dependence only (last axis t); the
x-direction is homogeneous.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from src.background.grid import Grid
from src.utils.errors import GridError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

DIM = 4
ETA = np.diag([-1.0, 1.0, 1.0, 1.0])


class BackgroundKind(Enum):
    """Supported background charts."""
    MINKOWSKI_TORUS = "minkowski"
    DE_SITTER_FLAT_CHART = "desitter"


@dataclass(frozen=True)
class BackgroundSpec:
    """Chart selection plus the Hubble rate for de Sitter."""
    kind: BackgroundKind = BackgroundKind.MINKOWSKI_TORUS
    H: float = 1.0

    def __post_init__(self):
        if self.H <= 0:
            raise GridError(f"Hubble rate must be positive, got {self.H}", constraint="H", H=self.H)

    @property
    def cosmological_constant(self) -> float:
        if self.kind is BackgroundKind.DE_SITTER_FLAT_CHART:
            return 3.0 * self.H ** 2
        return 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind.value, 'H': float(self.H)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'BackgroundSpec':
        return cls(kind=BackgroundKind(data.get('kind', 'minkowski')), H=float(data.get('H', 1.0)))


@dataclass(frozen=True, eq=False)
class GeometryPoint:
    """Background geometry at a single grid point."""
    g: np.ndarray
    g_inv: np.ndarray
    Gamma: np.ndarray
    Riemann: np.ndarray
    Ricci: np.ndarray
    R: float
    sqrt_minus_g: float
    n: np.ndarray


def _connection_pattern() -> np.ndarray:
    pattern = np.zeros((DIM, DIM, DIM))
    for a in range(DIM):
        for b in range(DIM):
            for c in range(DIM):
                pattern[a, b, c] = ((a == b) * (c == 0) + (a == c) * (b == 0)
                                    + ETA[b, c] * (a == 0))
    return pattern


CONNECTION_PATTERN = _connection_pattern()


class Background:
    """
    Immutable background spacetime sampled on a grid.

    Attributes (time axis last):
        a, A, dA: scale factor, a'/a and its derivative, shape (nt,)
        g, g_inv: metric and inverse, shape (4, 4, nt)
        christoffel: Gamma^a_bc as [a, b, c, t]
        christoffel_dt: time derivative of christoffel
        riemann: R_abc^d as [a, b, c, d, t]
        ricci: R_ab as [a, b, t]; ricci_scalar: (nt,)
        sqrt_minus_g: a^4; sqrt_h: a^3
        n_up, n_down: unit normal of constant-t slices, shape (4, nt)
    """

    def __init__(self, spec: BackgroundSpec, grid: Grid):
        self.spec = spec
        self.grid = grid
        self.cosmological_constant = spec.cosmological_constant

        t = grid.t
        if spec.kind is BackgroundKind.DE_SITTER_FLAT_CHART:
            if grid.t1 >= 0:
                raise GridError(
                    f"de Sitter flat chart requires conformal time t1 < 0, got t1 = {grid.t1}",
                    constraint="conformal_time", t1=grid.t1,
                )
            self.a = -1.0 / (spec.H * t)
            self.A = -1.0 / t
            self.dA = 1.0 / t ** 2
        else:
            self.a = np.ones_like(t)
            self.A = np.zeros_like(t)
            self.dA = np.zeros_like(t)

        a2 = self.a ** 2
        self.g = ETA[:, :, None] * a2
        self.g_inv = ETA[:, :, None] / a2
        self.christoffel = CONNECTION_PATTERN[..., None] * self.A
        self.christoffel_dt = CONNECTION_PATTERN[..., None] * self.dA
        self.riemann = self._riemann()
        self.ricci = np.einsum('abcbt->act', self.riemann)
        self.ricci_scalar = np.einsum('abt,abt->t', self.g_inv, self.ricci)
        self.sqrt_minus_g = self.a ** 4
        self.sqrt_h = self.a ** 3
        self.n_up = np.zeros((DIM, grid.nt))
        self.n_up[0] = 1.0 / self.a
        self.n_down = np.zeros((DIM, grid.nt))
        self.n_down[0] = -self.a

        for array in self._arrays().values():
            array.setflags(write=False)

        logger.debug(f"🌌 Built {spec.kind.value} background on {grid.nt}x{grid.nx} grid "
                     f"(Lambda={self.cosmological_constant:g})")

    def _arrays(self) -> Dict[str, np.ndarray]:
        return {
            'a': self.a, 'A': self.A, 'dA': self.dA,
            'g': self.g, 'g_inv': self.g_inv,
            'christoffel': self.christoffel, 'christoffel_dt': self.christoffel_dt,
            'riemann': self.riemann, 'ricci': self.ricci, 'ricci_scalar': self.ricci_scalar,
            'sqrt_minus_g': self.sqrt_minus_g, 'sqrt_h': self.sqrt_h,
            'n_up': self.n_up, 'n_down': self.n_down,
        }

    def _riemann(self) -> np.ndarray:
        gam = self.christoffel
        dgam = self.christoffel_dt
        # R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
        standard = np.einsum('acet,edbt->abcdt', gam, gam) - np.einsum('adet,ecbt->abcdt', gam, gam)
        standard[:, :, 0, :, :] += np.transpose(dgam, (0, 2, 1, 3))
        standard[:, :, :, 0, :] -= np.transpose(dgam, (0, 2, 1, 3))
        return np.ascontiguousarray(np.transpose(standard, (3, 2, 1, 0, 4)))

    def scale_factor(self, t) -> tuple:
        """Closed-form (a, a'/a) at arbitrary coordinate times."""
        t = np.asarray(t, dtype=float)
        if self.is_de_sitter:
            return -1.0 / (self.spec.H * t), -1.0 / t
        return np.ones_like(t), np.zeros_like(t)

    @property
    def is_de_sitter(self) -> bool:
        return self.spec.kind is BackgroundKind.DE_SITTER_FLAT_CHART

    @property
    def shape(self):
        return self.grid.shape

    def geometry_at(self, j: int, i: int) -> GeometryPoint:
        """Geometry at time index j and space index i."""
        if not (0 <= j < self.grid.nt and 0 <= i < self.grid.nx):
            raise IndexError(f"grid point ({j}, {i}) outside {self.grid.nt}x{self.grid.nx} grid")
        return GeometryPoint(
            g=self.g[..., j].copy(),
            g_inv=self.g_inv[..., j].copy(),
            Gamma=self.christoffel[..., j].copy(),
            Riemann=self.riemann[..., j].copy(),
            Ricci=self.ricci[..., j].copy(),
            R=float(self.ricci_scalar[j]),
            sqrt_minus_g=float(self.sqrt_minus_g[j]),
            n=self.n_up[:, j].copy(),
        )

    def window(self, j0: int, j1: int) -> 'Background':
        """Background restricted to time layers j0..j1 inclusive."""
        return Background(self.spec, self.grid.window(j0, j1))

    def refined(self) -> 'Background':
        """Same chart on the doubled grid."""
        return Background(self.spec, self.grid.refined())

    def einstein_tensor(self) -> np.ndarray:
        """G_ab = R_ab - R g_ab / 2, shape (4, 4, nt)."""
        return self.ricci - 0.5 * self.ricci_scalar * self.g

    def to_dict(self) -> Dict[str, Any]:
        data = self.spec.to_dict()
        data['grid'] = self.grid.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Background':
        return cls(BackgroundSpec.from_dict(data), Grid.from_dict(data['grid']))


def build_background(spec: BackgroundSpec, grid: Grid) -> Background:
    """Construct the background for a chart on a grid."""
    grid.validate()
    return Background(spec, grid)


def einstein_residual(bg: Background, cosmological_constant: Optional[float] = None) -> float:
    """
    Max over the grid of |G_ab + Lambda g_ab|.

    Passing ``cosmological_constant`` evaluates the residual for a value other
    than the chart's own.
    """
    lam = bg.cosmological_constant if cosmological_constant is None else cosmological_constant
    return float(np.max(np.abs(bg.einstein_tensor() + lam * bg.g)))


def reference_background(kind: str = "minkowski", nx: int = 64, nt: int = 256,
                         H: float = 1.0, L: float = 2.0 * np.pi) -> Background:
    """Background in the reference desk-scale configuration."""
    if kind == BackgroundKind.DE_SITTER_FLAT_CHART.value:
        grid = Grid(nt=nt, nx=nx, t0=-2.2, t1=-0.2, L=L)
        return build_background(BackgroundSpec(BackgroundKind.DE_SITTER_FLAT_CHART, H=H), grid)
    if kind == BackgroundKind.MINKOWSKI_TORUS.value:
        grid = Grid(nt=nt, nx=nx, t0=0.0, t1=2.0, L=L)
        return build_background(BackgroundSpec(BackgroundKind.MINKOWSKI_TORUS), grid)
    raise ValueError(f"unknown background kind: {kind}")
