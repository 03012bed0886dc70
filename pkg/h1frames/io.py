"""
Files the `h1` command reads and writes.

Structured geometry is JSON, plottable columns are CSV with a one-line
header and 17 significant digits, and computed grids can go to HDF5
records instead whenever the path ends in `.h1rec`. Nothing written here
carries a timestamp, so the same inputs always give the same bytes.
"""
import json
from pathlib import Path
from typing import TYPE_CHECKING, Any, Union

import numpy as np

from .curves import ParamCurve, CurveSignature, GeodesicParams, HamiltonianState
from .group import HeisenbergMotion, OrientedFrame
from .record import GridRecord
from .surfaces import SurfacePatch, SurfaceCoefficients, SurfaceInvariants, Coframe, COEFFICIENT_NAMES
from .utils import uniform_step
from .utils.exceptions import InvalidInput, NonUniformGrid

if TYPE_CHECKING:
    from .utils.types import PathLike

CSV_FORMAT = "%.17g"
SIGNATURE_COLUMNS = ("s", "k", "tau")
COEFFICIENT_COLUMNS = ("u", "v") + COEFFICIENT_NAMES
PLOT_COLUMNS = ("t", "x", "y", "z")
INVARIANT_INPUT_KEYS = ('alpha', 'l', 'coframe_p1', 'coframe_q1', 'coframe_p2', 'coframe_q2')

def is_record_path(path : 'PathLike')->bool:
    return Path(path).suffix == f".{GridRecord.FILE_EXTENSION}"

## JSON

def _plain(value : Any)->Any:
    """ numpy scalars to Python ones, non-finite floats to null """
    if isinstance(value, dict):
        return {str(key) : _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value

def read_json(path : 'PathLike')->Any:
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except OSError as e:
        raise InvalidInput(f"Cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InvalidInput(f"{path} is not valid JSON: {e}")

def write_json(path : 'PathLike', data : Any)->Path:
    path = Path(path)
    path.parent.mkdir(parents = True, exist_ok = True)
    with open(path, 'w') as f:
        json.dump(_plain(data), f, indent = 1, allow_nan = False)
        f.write("\n")
    return path

## CSV

def read_csv(path : 'PathLike', columns : tuple[str, ...])->np.ndarray:
    """ (n_rows, len(columns)) array from a CSV whose header must be `columns` """
    try:
        with open(path, 'r') as f:
            header = f.readline().strip()
            if tuple(name.strip() for name in header.split(',')) != columns:
                raise InvalidInput(f"{path}: expected header {','.join(columns)!r}, got {header!r}")
            rows = np.loadtxt(f, delimiter = ',', ndmin = 2, dtype = float)
    except OSError as e:
        raise InvalidInput(f"Cannot read {path}: {e}")
    except ValueError as e:
        raise InvalidInput(f"{path} has malformed rows: {e}")
    if rows.shape[1] != len(columns):
        raise InvalidInput(f"{path}: expected {len(columns)} columns, got {rows.shape[1]}")
    return rows

def write_csv(path : 'PathLike', columns : tuple[str, ...], rows : np.ndarray)->Path:
    path = Path(path)
    path.parent.mkdir(parents = True, exist_ok = True)
    np.savetxt(
        path, np.asarray(rows, dtype=float),
        fmt = CSV_FORMAT, delimiter = ',', header = ','.join(columns), comments = '',
    )
    return path

## Curves

def read_curve(path : 'PathLike')->ParamCurve:
    return ParamCurve.from_json(read_json(path))

def write_curve(path : 'PathLike', curve : ParamCurve)->Path:
    return write_json(path, curve.to_json())

def read_signature(path : 'PathLike')->CurveSignature:
    """ A signature CSV with header s,k,tau, or a saved record """
    if is_record_path(path):
        return CurveSignature.load(path)
    rows = read_csv(path, SIGNATURE_COLUMNS)
    try:
        return CurveSignature(rows[:, 0], rows[:, 1], rows[:, 2], name = Path(path).stem)
    except (ValueError, NonUniformGrid) as e:
        raise InvalidInput(f"Bad signature in {path}: {e}")

def write_signature(path : 'PathLike', sig : CurveSignature)->Path:
    if is_record_path(path):
        return sig.save(path)
    return write_csv(path, SIGNATURE_COLUMNS, np.column_stack([sig.s, sig.k, sig.tau]))

def write_plot(path : 'PathLike', curve : ParamCurve)->Path:
    """ t,x,y,z columns for external plotters """
    return write_csv(path, PLOT_COLUMNS, np.column_stack([curve.t, curve.points]))

def read_frame(path : 'PathLike')->OrientedFrame:
    """ An initial frame, stored as the motion taking the standard frame to it """
    return OrientedFrame.from_json(read_json(path))

def read_motion(path : 'PathLike')->HeisenbergMotion:
    return HeisenbergMotion.from_json(read_json(path))

def write_motion(path : 'PathLike', motion : HeisenbergMotion, **extra)->Path:
    return write_json(path, {**motion.to_json(), **extra})

def read_geodesic_request(path : 'PathLike')->Union[GeodesicParams, HamiltonianState]:
    """
    Either closed-form parameters ({"params" : {"c3" : ..., ...}} or the
    bare parameter mapping) or an initial Hamiltonian state
    ({"state" : {"x" : [...], "xi" : [...]}} or the bare state).
    """
    data = read_json(path)
    if not isinstance(data, dict):
        raise InvalidInput(f"{path}: expected a JSON object")
    if "params" in data:
        return GeodesicParams.from_json(data["params"])
    if "state" in data:
        return HamiltonianState.from_json(data["state"])
    if "c3" in data:
        return GeodesicParams.from_json(data)
    if "x" in data and "xi" in data:
        return HamiltonianState.from_json(data)
    raise InvalidInput(f"{path} holds neither geodesic parameters nor a Hamiltonian state")

## Surfaces

def read_patch(path : 'PathLike')->SurfacePatch:
    return SurfacePatch.from_json(read_json(path))

def write_patch(path : 'PathLike', patch : SurfacePatch)->Path:
    return write_json(path, patch.to_json())

def _coefficients_from_rows(rows : np.ndarray, name : str)->SurfaceCoefficients:
    """ Rows of u,v,a,b,c,l,m in any order back onto their grid """
    u, v = np.unique(rows[:, 0]), np.unique(rows[:, 1])
    if u.size*v.size != rows.shape[0]:
        raise InvalidInput(f"{rows.shape[0]} rows do not fill a {u.size}x{v.size} grid")
    i = np.searchsorted(u, rows[:, 0])
    j = np.searchsorted(v, rows[:, 1])
    grids = {}
    for column, key in enumerate(COEFFICIENT_NAMES, start = 2):
        grid = np.full((u.size, v.size), np.nan)
        grid[i, j] = rows[:, column]
        grids[key] = grid
    try:
        return SurfaceCoefficients(u[0], uniform_step(u), v[0], uniform_step(v), name = name, **grids)
    except (ValueError, NonUniformGrid) as e:
        raise InvalidInput(f"Bad coefficient grid: {e}")

def read_coefficients(path : 'PathLike')->SurfaceCoefficients:
    """ JSON grids, CSV rows u,v,a,b,c,l,m, or a saved record """
    path = Path(path)
    if is_record_path(path):
        return SurfaceCoefficients.load(path)
    if path.suffix == ".csv":
        return _coefficients_from_rows(read_csv(path, COEFFICIENT_COLUMNS), path.stem)
    return SurfaceCoefficients.from_json(read_json(path))

def write_coefficients(path : 'PathLike', coeffs : SurfaceCoefficients)->Path:
    path = Path(path)
    if is_record_path(path):
        return coeffs.save(path)
    if path.suffix == ".csv":
        U, V = np.meshgrid(coeffs.u, coeffs.v, indexing='ij')
        # u varies fastest, matching the patch layout
        columns = [U, V] + [getattr(coeffs, key) for key in COEFFICIENT_NAMES]
        rows = np.column_stack([grid.T.ravel() for grid in columns])
        return write_csv(path, COEFFICIENT_COLUMNS, rows)
    return write_json(path, coeffs.to_json())

def write_invariants(path : 'PathLike', invariants : SurfaceInvariants)->Path:
    if is_record_path(path):
        return invariants.save(path)
    return write_json(path, invariants.to_json())

def read_invariants(path : 'PathLike')->tuple[Coframe, np.ndarray, np.ndarray]:
    """
    (coframe, alpha, l) for reconstruction, from a saved SurfaceInvariants
    record or a JSON object with u0, du, v0, dv, alpha, l and the coframe
    grids coframe_p1, coframe_q1, coframe_p2, coframe_q2 (the layout
    `surface-invariants` writes). Other keys are ignored.
    """
    if is_record_path(path):
        record = SurfaceInvariants.load(path)
        return record.coframe, record.alpha, record.l

    data = read_json(path)
    try:
        grids = {key : np.array(data[key], dtype=float) for key in INVARIANT_INPUT_KEYS}
        coframe = Coframe(
            grids['coframe_p1'], grids['coframe_q1'], grids['coframe_p2'], grids['coframe_q2'],
            float(data["du"]), float(data["dv"]), float(data["u0"]), float(data["v0"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInput(f"Bad invariants file {path}: {e}")
    return coframe, grids['alpha'], grids['l']

## Reports

def write_report(path : 'PathLike', report : dict)->Path:
    return write_json(path, report)
