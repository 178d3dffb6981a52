"""
Deterministic JSON and CSV serialization of fields, Cauchy data, slice data
and reports.

JSON floats are written with ``repr`` (shortest round-trip form); CSV tables
use 17 significant digits. A CSV file starts with one ``# {json}`` header
line carrying the metadata needed to rebuild the object, followed by the
table.
"""

import io
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, Tuple, Union

import numpy as np
import pandas as pd

from src.adm.state import ADMPerturbation, ADMState
from src.background.grid import Grid
from src.cauchy.data import CauchyData
from src.fields.tensors import (
    COMPONENT_LABELS, DIM, ScalarField, SymField2, TensorField, VecField,
)
from src.utils.errors import UsageError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

FORMATS = ("json", "csv")
FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]
Field = Union[SymField2, TensorField]


# ============================================================================
# Plain Values
# ============================================================================

def plain(value: Any) -> Any:
    """Recursively convert numpy and complex values into JSON-safe objects."""
    if isinstance(value, Mapping):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, (np.integer, np.bool_)):
        return value.item()
    if isinstance(value, (complex, np.complexfloating)):
        return [plain(float(value.real)), plain(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def dumps(payload: Mapping[str, Any]) -> str:
    return json.dumps(plain(payload), indent=2, allow_nan=False) + "\n"


def _check_format(fmt: str) -> str:
    if fmt not in FORMATS:
        raise UsageError(f"unknown output format {fmt!r}; expected one of {FORMATS}", format=fmt)
    return fmt


def _write_text(path: PathLike, text: str) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as handle:
        handle.write(text)


def _csv_text(meta: Mapping[str, Any], frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    buffer.write("# " + json.dumps(plain(meta), allow_nan=False) + "\n")
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def _read_csv(path: PathLike) -> Tuple[Dict[str, Any], pd.DataFrame]:
    with open(path, 'r') as handle:
        header = handle.readline()
        if not header.startswith("# "):
            raise ValueError(f"{path} has no metadata header line")
        meta = json.loads(header[2:])
        frame = pd.read_csv(handle, float_precision='round_trip')
    return meta, frame


def _split_columns(labels: List[str], values: np.ndarray, is_complex: bool) -> Dict[str, np.ndarray]:
    """Component columns, with an '_im' column per label for complex data."""
    columns = {label: np.real(values[k]) for k, label in enumerate(labels)}
    if is_complex:
        for k, label in enumerate(labels):
            columns[f"{label}_im"] = np.imag(values[k])
    return columns


def _join_columns(frame: pd.DataFrame, labels: List[str], is_complex: bool) -> np.ndarray:
    real = np.stack([frame[label].to_numpy(dtype=float) for label in labels])
    if not is_complex:
        return real
    imag = np.stack([frame[f"{label}_im"].to_numpy(dtype=float) for label in labels])
    return real + 1j * imag


def _array_payload(array: np.ndarray) -> Dict[str, Any]:
    payload = {'real': np.real(array).tolist()}
    if np.iscomplexobj(array):
        payload['imag'] = np.imag(array).tolist()
    return payload


def _array_from_payload(payload: Mapping[str, Any]) -> np.ndarray:
    real = np.asarray(payload['real'], dtype=float)
    if 'imag' in payload:
        return real + 1j * np.asarray(payload['imag'], dtype=float)
    return real


# ============================================================================
# Fields
# ============================================================================

def _field_layout(field_like: Field) -> Tuple[str, str, List[str], np.ndarray]:
    """(type name, variance, component labels, component-major data)."""
    if isinstance(field_like, SymField2):
        return "SymField2", "dd", list(COMPONENT_LABELS), field_like.components
    rank = field_like.rank
    if rank == 0:
        labels = ["value"]
    else:
        labels = ["".join(str(k) for k in index) for index in np.ndindex(*(DIM,) * rank)]
    data = field_like.data.reshape((len(labels),) + field_like.grid.shape)
    return type(field_like).__name__, field_like.variance, labels, data


def _field_from_layout(type_name: str, grid: Grid, variance: str, data: np.ndarray) -> Field:
    if type_name == "SymField2":
        return SymField2(grid, data)
    shape = (DIM,) * len(variance) + grid.shape
    data = data.reshape(shape)
    if type_name == "ScalarField":
        return ScalarField(grid, data)
    if type_name == "VecField":
        return VecField(grid, data, variance)
    if type_name == "TensorField":
        return TensorField(grid, data, variance)
    raise ValueError(f"unknown field type {type_name!r}")


def export_field(field_like: Field, path: PathLike, fmt: str = "json") -> None:
    """Write a grid field; CSV rows are (j, i) samples, one column per component."""
    type_name, variance, labels, data = _field_layout(field_like)
    is_complex = bool(np.iscomplexobj(data))
    meta = {
        'type': type_name,
        'variance': variance,
        'grid': field_like.grid.to_dict(),
        'components': labels,
        'complex': is_complex,
    }
    if _check_format(fmt) == "json":
        _write_text(path, dumps({**meta, **_array_payload(data)}))
    else:
        nt, nx = field_like.grid.shape
        j_index, i_index = np.meshgrid(np.arange(nt), np.arange(nx), indexing='ij')
        columns = {'j': j_index.ravel(), 'i': i_index.ravel()}
        columns.update(_split_columns(labels, data.reshape(len(labels), -1), is_complex))
        _write_text(path, _csv_text(meta, pd.DataFrame(columns)))
    logger.debug(f"💾 Exported {type_name} to {path} ({fmt})")


def import_field(path: PathLike, fmt: str = "json") -> Field:
    if _check_format(fmt) == "json":
        with open(path, 'r') as handle:
            payload = json.load(handle)
        data = _array_from_payload(payload)
        meta = payload
    else:
        meta, frame = _read_csv(path)
        data = _join_columns(frame, meta['components'], meta['complex'])
    grid = Grid.from_dict(meta['grid'])
    data = np.asarray(data).reshape((len(meta['components']),) + grid.shape)
    return _field_from_layout(meta['type'], grid, meta['variance'], data)


# ============================================================================
# Cauchy Data and Slice Data
# ============================================================================

def export_cauchy_data(data: CauchyData, path: PathLike, fmt: str = "json") -> None:
    """Cauchy data with the slice index in the header."""
    is_complex = bool(np.iscomplexobj(data.value) or np.iscomplexobj(data.velocity))
    meta = {'type': 'CauchyData', 'sigma': data.sigma, 'nx': data.nx,
            'components': list(COMPONENT_LABELS), 'complex': is_complex}
    if _check_format(fmt) == "json":
        payload = dict(meta)
        payload['value'] = _array_payload(data.value)
        payload['velocity'] = _array_payload(data.velocity)
        _write_text(path, dumps(payload))
        return
    columns: Dict[str, np.ndarray] = {'i': np.arange(data.nx)}
    value_labels = [f"value_{label}" for label in COMPONENT_LABELS]
    velocity_labels = [f"velocity_{label}" for label in COMPONENT_LABELS]
    columns.update(_split_columns(value_labels, data.value, is_complex))
    columns.update(_split_columns(velocity_labels, data.velocity, is_complex))
    _write_text(path, _csv_text(meta, pd.DataFrame(columns)))


def import_cauchy_data(path: PathLike, fmt: str = "json") -> CauchyData:
    if _check_format(fmt) == "json":
        with open(path, 'r') as handle:
            payload = json.load(handle)
        return CauchyData(int(payload['sigma']), _array_from_payload(payload['value']),
                          _array_from_payload(payload['velocity']))
    meta, frame = _read_csv(path)
    value = _join_columns(frame, [f"value_{label}" for label in meta['components']], meta['complex'])
    velocity = _join_columns(frame, [f"velocity_{label}" for label in meta['components']],
                             meta['complex'])
    return CauchyData(int(meta['sigma']), value, velocity)


_SLICE_LABELS = [f"{a}{b}" for a in range(3) for b in range(3)]


def export_slice_data(data: Union[ADMPerturbation, ADMState], path: PathLike,
                      fmt: str = "json") -> None:
    """
    ADM slice data; the header flags which arrays are densities (p and varpi
    carry a factor sqrt(h)).
    """
    if isinstance(data, ADMState):
        arrays = {'h': data.h, 'varpi': data.varpi}
        meta: Dict[str, Any] = {'type': 'ADMState', 'density': {'h': False, 'varpi': True},
                                'cosmological_constant': data.cosmological_constant,
                                'dx': data.dx}
    else:
        arrays = {'gamma3': data.gamma3, 'p': data.p}
        meta = {'type': 'ADMPerturbation', 'density': {'gamma3': False, 'p': True}}
    is_complex = any(np.iscomplexobj(array) for array in arrays.values())
    meta.update({'nx': next(iter(arrays.values())).shape[-1], 'components': _SLICE_LABELS,
                 'complex': is_complex})
    if _check_format(fmt) == "json":
        payload = dict(meta)
        payload.update({name: _array_payload(array) for name, array in arrays.items()})
        _write_text(path, dumps(payload))
        return
    columns: Dict[str, np.ndarray] = {'i': np.arange(meta['nx'])}
    for name, array in arrays.items():
        labels = [f"{name}_{label}" for label in _SLICE_LABELS]
        columns.update(_split_columns(labels, array.reshape(9, -1), is_complex))
    _write_text(path, _csv_text(meta, pd.DataFrame(columns)))


def import_slice_data(path: PathLike, fmt: str = "json") -> Union[ADMPerturbation, ADMState]:
    if _check_format(fmt) == "json":
        with open(path, 'r') as handle:
            meta = json.load(handle)
        arrays = {name: _array_from_payload(meta[name]) for name in meta['density']}
    else:
        meta, frame = _read_csv(path)
        arrays = {}
        for name in meta['density']:
            labels = [f"{name}_{label}" for label in meta['components']]
            arrays[name] = _join_columns(frame, labels, meta['complex']).reshape(3, 3, -1)
    if meta['type'] == 'ADMState':
        return ADMState(arrays['h'], arrays['varpi'], float(meta['cosmological_constant']),
                        float(meta['dx']))
    return ADMPerturbation(arrays['gamma3'], arrays['p'])


# ============================================================================
# Reports
# ============================================================================

def export_report(report: Any, path: PathLike, fmt: str = "json") -> None:
    """
    Write a report object (anything with ``to_dict``) or a plain mapping.

    CSV output of a suite report has one row per check; other mappings are
    flattened into key/value rows.
    """
    payload = report.to_dict() if hasattr(report, 'to_dict') else dict(report)
    if _check_format(fmt) == "json":
        _write_text(path, dumps(payload))
        return
    rows = payload.get('checks')
    if rows is not None:
        meta = {key: value for key, value in payload.items() if key != 'checks'}
        frame = pd.DataFrame([plain(row) for row in rows])
    else:
        meta = {'type': 'mapping'}
        flat = pd.json_normalize(plain(payload), sep='.')
        frame = pd.DataFrame({'key': list(flat.columns),
                              'value': [json.dumps(v) for v in flat.iloc[0].tolist()]})
    _write_text(path, _csv_text(meta, frame))


def export(obj: Any, path: PathLike, fmt: str = "json") -> None:
    """Dispatch on the object type."""
    if isinstance(obj, (SymField2, TensorField)):
        export_field(obj, path, fmt)
    elif isinstance(obj, CauchyData):
        export_cauchy_data(obj, path, fmt)
    elif isinstance(obj, (ADMPerturbation, ADMState)):
        export_slice_data(obj, path, fmt)
    else:
        export_report(obj, path, fmt)
