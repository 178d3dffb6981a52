"""
Periodic (t, x) sampling grid.

The x-direction is a circle of length L (index wrap i -> i mod nx); the
transverse y and z circles have unit length and carry no samples, so every
field is independent of them and transverse integrals contribute a factor 1.
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from src.utils.errors import GridError

CFL_LIMIT = 0.5


@dataclass(frozen=True)
class Grid:
    """Uniform grid with nt time samples on [t0, t1] and nx periodic samples."""

    nt: int
    nx: int
    t0: float
    t1: float
    L: float = 2.0 * np.pi

    def __post_init__(self):
        self.validate()

    @property
    def dt(self) -> float:
        return (self.t1 - self.t0) / (self.nt - 1)

    @property
    def dx(self) -> float:
        return self.L / self.nx

    @property
    def t(self) -> np.ndarray:
        """Time samples t0 + j*dt."""
        return self.t0 + self.dt * np.arange(self.nt)

    @property
    def x(self) -> np.ndarray:
        """Spatial samples i*dx on [0, L)."""
        return self.dx * np.arange(self.nx)

    @property
    def shape(self):
        return (self.nt, self.nx)

    @property
    def courant(self) -> float:
        return self.dt / self.dx

    def validate(self) -> bool:
        """Validate grid values, naming the first violated constraint."""
        if not isinstance(self.nt, (int, np.integer)) or self.nt < 5:
            raise GridError(f"nt must be an integer >= 5, got {self.nt}", constraint="nt", nt=self.nt)
        if not isinstance(self.nx, (int, np.integer)) or self.nx < 4:
            raise GridError(f"nx must be an integer >= 4, got {self.nx}", constraint="nx", nx=self.nx)
        if self.L <= 0:
            raise GridError(f"spatial period must be positive, got {self.L}", constraint="L", L=self.L)
        if self.t1 <= self.t0:
            raise GridError(f"time range must be increasing, got [{self.t0}, {self.t1}]",
                            constraint="time_range", t0=self.t0, t1=self.t1)
        if self.courant > CFL_LIMIT * (1.0 + 1e-12):
            raise GridError(
                f"CFL violated: dt/dx = {self.courant:.6g} exceeds {CFL_LIMIT}",
                constraint="cfl", dt=self.dt, dx=self.dx,
            )
        return True

    def refined(self) -> 'Grid':
        """Grid with dt and dx halved exactly."""
        return Grid(nt=2 * (self.nt - 1) + 1, nx=2 * self.nx, t0=self.t0, t1=self.t1, L=self.L)

    def window(self, j0: int, j1: int) -> 'Grid':
        """Sub-grid of the time layers j0..j1 inclusive."""
        if not 0 <= j0 < j1 < self.nt:
            raise IndexError(f"time window [{j0}, {j1}] outside 0..{self.nt - 1}")
        times = self.t
        return Grid(nt=j1 - j0 + 1, nx=self.nx, t0=float(times[j0]), t1=float(times[j1]), L=self.L)

    def to_dict(self) -> Dict[str, Any]:
        return {'nt': int(self.nt), 'nx': int(self.nx), 't0': float(self.t0),
                't1': float(self.t1), 'L': float(self.L)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Grid':
        return cls(nt=int(data['nt']), nx=int(data['nx']), t0=float(data['t0']),
                   t1=float(data['t1']), L=float(data.get('L', 2.0 * np.pi)))
