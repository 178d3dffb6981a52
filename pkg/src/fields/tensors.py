"""
Grid-sampled tensor fields.

Component arrays carry the tensor indices first and the (t, x) grid axes last,
so a rank-2 field has data of shape (4, 4, nt, nx). Symmetric rank-2 fields
store only the ten independent components in the order of COMPONENT_ORDER.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from src.background.grid import Grid
from src.utils.errors import SupportError

DIM = 4

COMPONENT_ORDER: Tuple[Tuple[int, int], ...] = (
    (0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3),
)
COMPONENT_LABELS: Tuple[str, ...] = tuple(f"{a}{b}" for a, b in COMPONENT_ORDER)

_PACK_INDEX = np.zeros((DIM, DIM), dtype=int)
for _k, (_a, _b) in enumerate(COMPONENT_ORDER):
    _PACK_INDEX[_a, _b] = _k
    _PACK_INDEX[_b, _a] = _k


@dataclass(frozen=True)
class SupportWindow:
    """
    Inclusive index window [t_lo, t_hi] x [x_lo, x_hi].

    The x-range is periodic: x_lo > x_hi denotes a window wrapping through
    index 0.
    """
    t_lo: int
    t_hi: int
    x_lo: int
    x_hi: int

    def mask(self, nt: int, nx: int) -> np.ndarray:
        rows = np.zeros(nt, dtype=bool)
        rows[self.t_lo:self.t_hi + 1] = True
        columns = np.zeros(nx, dtype=bool)
        if self.x_lo <= self.x_hi:
            columns[self.x_lo:self.x_hi + 1] = True
        else:
            columns[self.x_lo:] = True
            columns[:self.x_hi + 1] = True
        return rows[:, None] & columns[None, :]

    def is_interior(self, nt: int, layers: int = 2) -> bool:
        """True when the window keeps ``layers`` empty layers at both temporal ends."""
        return self.t_lo >= layers and self.t_hi <= nt - 1 - layers

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> Optional['SupportWindow']:
        """Smallest window containing every True entry, or None when empty."""
        rows = np.flatnonzero(mask.any(axis=1))
        if rows.size == 0:
            return None
        columns = mask.any(axis=0)
        nx = columns.size
        if columns.all():
            return cls(int(rows[0]), int(rows[-1]), 0, nx - 1)
        # the window is the complement of the longest circular run of empty columns
        empty = ~columns
        doubled = np.concatenate([empty, empty])
        best_len, best_end, run = 0, 0, 0
        for index, is_empty in enumerate(doubled):
            run = run + 1 if is_empty else 0
            if run > best_len and run <= nx:
                best_len, best_end = run, index
        x_lo = (best_end + 1) % nx
        x_hi = (best_end - best_len) % nx
        return cls(int(rows[0]), int(rows[-1]), int(x_lo), int(x_hi))

    def to_dict(self):
        return {'t_lo': self.t_lo, 't_hi': self.t_hi, 'x_lo': self.x_lo, 'x_hi': self.x_hi}


@dataclass(frozen=True, eq=False)
class TensorField:
    """
    General tensor field with a variance string, one 'u' (upper) or 'd' (lower)
    per index.
    """
    grid: Grid
    data: np.ndarray
    variance: str = ""

    def __post_init__(self):
        expected = (DIM,) * len(self.variance) + self.grid.shape
        if self.data.shape != expected:
            raise ValueError(f"field data shape {self.data.shape} does not match {expected}")
        if any(kind not in "ud" for kind in self.variance):
            raise ValueError(f"variance must use 'u'/'d', got {self.variance!r}")

    @property
    def rank(self) -> int:
        return len(self.variance)

    @property
    def dtype(self):
        return self.data.dtype

    def _like(self, data: np.ndarray) -> 'TensorField':
        return type(self)(self.grid, data, self.variance)

    def _check_compatible(self, other: 'TensorField') -> None:
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")
        if other.variance != self.variance:
            raise ValueError(f"variance mismatch: {self.variance!r} vs {other.variance!r}")

    def __add__(self, other: 'TensorField') -> 'TensorField':
        self._check_compatible(other)
        return self._like(self.data + other.data)

    def __sub__(self, other: 'TensorField') -> 'TensorField':
        self._check_compatible(other)
        return self._like(self.data - other.data)

    def __mul__(self, scalar: complex) -> 'TensorField':
        return self._like(self.data * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> 'TensorField':
        return self._like(-self.data)

    def conj(self) -> 'TensorField':
        return self._like(np.conj(self.data))

    def transpose(self, *axes: int) -> 'TensorField':
        """Permute tensor indices (grid axes stay last)."""
        order = tuple(axes) + (self.rank, self.rank + 1)
        variance = "".join(self.variance[k] for k in axes)
        return TensorField(self.grid, np.transpose(self.data, order), variance)

    def norm(self) -> float:
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0


class ScalarField(TensorField):
    """Rank-0 field, data of shape (nt, nx)."""

    def __init__(self, grid: Grid, data: np.ndarray, variance: str = ""):
        if variance:
            raise ValueError("scalar fields carry no indices")
        super().__init__(grid, np.asarray(data), "")


class VecField(TensorField):
    """Vector ('u') or covector ('d') field, data of shape (4, nt, nx)."""

    def __init__(self, grid: Grid, data: np.ndarray, variance: str = "u"):
        if variance not in ("u", "d"):
            raise ValueError(f"vector variance must be 'u' or 'd', got {variance!r}")
        super().__init__(grid, np.asarray(data), variance)

    @property
    def is_covector(self) -> bool:
        return self.variance == "d"


CovecField = VecField


@dataclass(frozen=True, eq=False)
class SymField2:
    """
    Symmetric rank-(0,2) field stored as ten component arrays.

    ``support`` optionally declares a compact-support window; construction via
    ``with_support`` verifies that every component vanishes outside it.
    """
    grid: Grid
    components: np.ndarray
    support: Optional[SupportWindow] = field(default=None)

    def __post_init__(self):
        expected = (len(COMPONENT_ORDER),) + self.grid.shape
        if self.components.shape != expected:
            raise ValueError(f"component array shape {self.components.shape} does not match {expected}")

    @classmethod
    def zeros(cls, grid: Grid, dtype=float) -> 'SymField2':
        return cls(grid, np.zeros((len(COMPONENT_ORDER),) + grid.shape, dtype=dtype))

    @classmethod
    def from_full(cls, grid: Grid, data: np.ndarray,
                  support: Optional[SupportWindow] = None) -> 'SymField2':
        """Pack a (4, 4, nt, nx) array, averaging (a,b) and (b,a)."""
        packed = np.stack([0.5 * (data[a, b] + data[b, a]) for a, b in COMPONENT_ORDER])
        return cls(grid, packed, support)

    @classmethod
    def from_tensor(cls, tensor: TensorField) -> 'SymField2':
        if tensor.variance != "dd":
            raise ValueError(f"expected a (0,2) tensor, got variance {tensor.variance!r}")
        return cls.from_full(tensor.grid, tensor.data)

    def full(self) -> np.ndarray:
        """Expanded (4, 4, nt, nx) component array."""
        return self.components[_PACK_INDEX]

    def as_tensor(self) -> TensorField:
        return TensorField(self.grid, self.full(), "dd")

    def component(self, a: int, b: int) -> np.ndarray:
        return self.components[_PACK_INDEX[a, b]]

    @property
    def dtype(self):
        return self.components.dtype

    def with_support(self, window: SupportWindow) -> 'SymField2':
        """Declare compact support, checking that the field vanishes outside the window."""
        outside = ~window.mask(*self.grid.shape)
        leak = float(np.max(np.abs(self.components[:, outside]))) if outside.any() else 0.0
        if leak != 0.0:
            raise SupportError(f"field is nonzero ({leak:.3e}) outside declared window",
                               window=window.to_dict(), leak=leak)
        return SymField2(self.grid, self.components, window)

    def _check_grid(self, other: 'SymField2') -> None:
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")

    def __add__(self, other: 'SymField2') -> 'SymField2':
        self._check_grid(other)
        return SymField2(self.grid, self.components + other.components)

    def __sub__(self, other: 'SymField2') -> 'SymField2':
        self._check_grid(other)
        return SymField2(self.grid, self.components - other.components)

    def __mul__(self, scalar: complex) -> 'SymField2':
        return SymField2(self.grid, self.components * scalar, self.support)

    __rmul__ = __mul__

    def __neg__(self) -> 'SymField2':
        return SymField2(self.grid, -self.components, self.support)

    def conj(self) -> 'SymField2':
        return SymField2(self.grid, np.conj(self.components), self.support)

    def norm(self) -> float:
        return float(np.max(np.abs(self.components)))


RankTwo = Union[SymField2, TensorField]
AnyField = Union[SymField2, TensorField]


def as_tensor(field_like: AnyField) -> TensorField:
    """View any field as a TensorField."""
    if isinstance(field_like, SymField2):
        return field_like.as_tensor()
    return field_like


def symmetric_part(f: RankTwo) -> SymField2:
    """Symmetric part of a (0,2) test tensor."""
    if isinstance(f, SymField2):
        return f
    return SymField2.from_tensor(f)


def support_of(field_like: AnyField, threshold: float = 0.0) -> Optional[SupportWindow]:
    """Smallest window containing every entry of magnitude above ``threshold``."""
    if isinstance(field_like, SymField2):
        values = np.abs(field_like.components)
    else:
        values = np.abs(field_like.data)
    mask = values.reshape((-1,) + values.shape[-2:]).max(axis=0) > threshold
    return SupportWindow.from_mask(mask)


def require_interior_support(field_like: AnyField, layers: int = 2, name: str = "field") -> None:
    """Raise SupportError unless the field vanishes on ``layers`` layers at both temporal ends."""
    tensor = as_tensor(field_like)
    nt = tensor.grid.nt
    edge = np.concatenate([tensor.data[..., :layers, :], tensor.data[..., nt - layers:, :]], axis=-2)
    leak = float(np.max(np.abs(edge))) if edge.size else 0.0
    if leak != 0.0:
        raise SupportError(
            f"{name} support touches the temporal boundary ({leak:.3e} within {layers} layers)",
            leak=leak, layers=layers,
        )
